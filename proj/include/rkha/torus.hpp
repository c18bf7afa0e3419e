#pragma once

// The d-torus T^d = (R/Z)^d, its dual lattice Z^d, and uniform sampling grids.
//
// Angles are normalized to period 1, so the character attached to a frequency
// vector g is x -> exp(2 pi i g.x).

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace rkha {

inline constexpr double kPointTolerance = 1e-12;
inline constexpr std::size_t kDefaultGridCap = std::size_t{1} << 24;

/// A point of T^d with every coordinate reduced to [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> coords);
  TorusPoint(std::initializer_list<double> coords);

  static TorusPoint identity(std::size_t dim);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  TorusPoint operator+(const TorusPoint& other) const;
  TorusPoint operator-(const TorusPoint& other) const;
  TorusPoint operator-() const;

  /// Coordinatewise circular distance <= tol.
  bool approx_equal(const TorusPoint& other, double tol = kPointTolerance) const;

 private:
  std::vector<double> coords_;
};

/// A point of the dual lattice Z^d.
class FreqVector {
 public:
  FreqVector() = default;
  explicit FreqVector(std::vector<std::int64_t> components)
      : c_(std::move(components)) {}
  FreqVector(std::initializer_list<std::int64_t> components) : c_(components) {}

  static FreqVector zero(std::size_t dim) {
    return FreqVector(std::vector<std::int64_t>(dim, 0));
  }

  std::size_t dim() const { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::span<const std::int64_t> components() const { return c_; }

  bool is_zero() const;
  std::int64_t norm_inf() const;

  FreqVector operator+(const FreqVector& other) const;
  FreqVector operator-(const FreqVector& other) const;
  FreqVector operator-() const;

  auto operator<=>(const FreqVector&) const = default;
  bool operator==(const FreqVector&) const = default;

 private:
  std::vector<std::int64_t> c_;
};

/// exp(2 pi i g.x). The phase is reduced mod 1 per coordinate before the
/// trigonometric call, so large frequencies keep full accuracy.
std::complex<double> character_eval(const FreqVector& gamma, const TorusPoint& x);

/// Uniform grid with n points per dimension: coordinates j/n, lexicographic
/// order (last coordinate fastest).
class Grid {
 public:
  Grid(std::size_t n, std::size_t dim, std::size_t cap = kDefaultGridCap);

  std::size_t per_dim() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return size_; }
  /// Haar quadrature weight of every node.
  double weight() const { return 1.0 / static_cast<double>(size_); }
  TorusPoint point(std::size_t index) const;

 private:
  std::size_t n_;
  std::size_t dim_;
  std::size_t size_;
};

std::vector<TorusPoint> grid_points(std::size_t n, std::size_t dim,
                                    std::size_t cap = kDefaultGridCap);

/// Number of lattice points in the box {|g|_inf <= radius} of Z^dim.
std::size_t box_size(std::size_t dim, std::int64_t radius);

/// All lattice points with |g|_inf <= radius, lexicographic order.
std::vector<FreqVector> box(std::size_t dim, std::int64_t radius);

/// Visits the box in the same order as box() without materializing it.
void for_each_in_box(std::size_t dim, std::int64_t radius,
                     const std::function<void(const FreqVector&)>& visit);

}  // namespace rkha
