#pragma once

// Band-limited elements of H_lambda as finitely supported Fourier coefficient
// maps, with the Hilbert structure
//
//   <f, g> = sum_g conj(f^(g)) g^(g) / lambda(g),
//
// pointwise products (finite convolutions of coefficients), the conjugation
// involution, and grid-seeded Newton solvers for inverses and square roots.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rkha/torus.hpp"
#include "rkha/weight_analysis.hpp"
#include "rkha/weights.hpp"

namespace rkha {

using Complex = std::complex<double>;

class FourierPoly {
 public:
  using CoeffMap = std::map<FreqVector, Complex>;

  explicit FourierPoly(Weight weight);
  FourierPoly(Weight weight, CoeffMap coeffs);

  /// The unit 1_G.
  static FourierPoly unit(const Weight& weight);
  /// c * gamma.
  static FourierPoly character(const Weight& weight, const FreqVector& gamma,
                               Complex c = 1.0);
  /// Orthonormal basis element psi_gamma = xi(gamma) gamma.
  static FourierPoly basis(const Weight& weight, const FreqVector& gamma);

  const Weight& weight() const { return weight_; }
  std::size_t dim() const { return weight_.dim(); }
  const CoeffMap& coeffs() const { return coeffs_; }
  std::size_t support_size() const { return coeffs_.size(); }

  Complex coeff(const FreqVector& gamma) const;
  void set(const FreqVector& gamma, Complex value);
  void add(const FreqVector& gamma, Complex value);

  /// Largest |g|_inf over the support; 0 for the zero element.
  std::int64_t bandwidth() const;
  /// Coefficients restricted to |g|_inf <= radius.
  FourierPoly truncated(std::int64_t radius) const;
  /// Hermitian symmetry f^(-g) = conj(f^(g)) to within tol * max|f^|.
  bool is_real(double tol = 1e-12) const;
  /// Projection onto real-valued functions: (f + f*) / 2.
  FourierPoly real_part() const;

  FourierPoly operator+(const FourierPoly& other) const;
  FourierPoly operator-(const FourierPoly& other) const;
  FourierPoly operator*(Complex scalar) const;
  friend FourierPoly operator*(Complex scalar, const FourierPoly& f) { return f * scalar; }

 private:
  void require_compatible(const FourierPoly& other) const;

  Weight weight_;
  CoeffMap coeffs_;
};

double hnorm(const FourierPoly& f);
Complex inner(const FourierPoly& f, const FourierPoly& g);

/// Exact finite convolution of the coefficient maps.
FourierPoly multiply(const FourierPoly& f, const FourierPoly& g,
                     std::size_t cap = std::size_t{1} << 24);
FourierPoly involution(const FourierPoly& f);
Complex evaluate(const FourierPoly& f, const TorusPoint& x);

/// Values of f at every node of the n-per-dimension grid (Grid order).
std::vector<Complex> sample_on_grid(const FourierPoly& f, std::size_t n);
/// Coefficients in |g|_inf <= radius of the trigonometric interpolant of
/// grid samples; requires n >= 2 radius + 1.
FourierPoly from_grid_samples(const Weight& weight, const std::vector<Complex>& samples,
                              std::size_t n, std::int64_t radius);

/// sqrt(C) of a certified convolution report: ||fg|| <= sqrt(C) ||f|| ||g||
/// whenever supp(fg) lies in the report window.
double banach_constant(const Weight& w, const ConvolutionReport& report);

struct SolverOptions {
  /// |f| below this anywhere on the check grid means "vanishing".
  double vanishing_threshold = 1e-8;
  /// Check grid per dimension >= oversampling * (2 * bandwidth + 1).
  std::size_t oversampling = 4;
  int max_iterations = 100;
  /// Step halvings tried before an iteration is declared stalled.
  int max_halvings = 8;
};

struct AlgebraResult {
  FourierPoly value;
  /// H_lambda norm of the defect, recomputed from the returned value.
  double residual;
  int iterations;
  bool converged;
};

/// g with |g^| supported in |g|_inf <= bandwidth and ||fg - 1|| minimized by
/// damped Newton g <- g + g (1 - fg), seeded from grid samples of 1/f.
/// Throws NotInvertible when |f| falls below the vanishing threshold on the
/// check grid.
AlgebraResult invert(const FourierPoly& f, std::int64_t bandwidth, double tol,
                     const SolverOptions& options = {});

/// Real g > 0 with ||g^2 - f|| minimized; seeded from grid samples of sqrt f.
/// Throws DomainError unless f is real and strictly positive on the grid.
AlgebraResult sqrt_positive(const FourierPoly& f, std::int64_t bandwidth, double tol,
                            const SolverOptions& options = {});

/// Minimum over the check grid of Re f (for real f) / |f|.
double grid_min_real(const FourierPoly& f, std::size_t n);
double grid_min_abs(const FourierPoly& f, std::size_t n);
/// Check-grid resolution used by the solvers for f at the given bandwidth.
std::size_t check_grid_size(const FourierPoly& f, std::int64_t bandwidth,
                            const SolverOptions& options = {});

struct SpectrumProbe {
  Complex z;
  bool invertible = false;
  double residual = 0.0;
  /// "inverted", "on-sampled-range", "not-invertible" or "not-converged".
  std::string reason;
};

/// Attempts to invert f - z 1_G at the given bandwidth. z within
/// range_threshold of a sampled value of f is reported non-invertible.
SpectrumProbe spectrum_probe(const FourierPoly& f, Complex z, std::int64_t bandwidth, double tol,
                             const SolverOptions& options = {}, double range_threshold = 1e-6);

}  // namespace rkha
