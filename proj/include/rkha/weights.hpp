#pragma once

// Weight functions lambda : Z^d -> (0, inf) defining the spaces H_lambda.
//
// Every weight is strictly positive, symmetric (lambda(g) = lambda(-g)) and
// summable, with a certified upper bound on the mass outside any radius.
// Catalog families are radial and nonincreasing in a chosen lattice norm;
// custom weights are tables on an l-inf box with a declared outside mass.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rkha/torus.hpp"

namespace rkha {

enum class LatticeNorm { l1, l2, linf };

double lattice_norm(const FreqVector& gamma, LatticeNorm norm);
std::string to_string(LatticeNorm norm);
LatticeNorm lattice_norm_from_string(const std::string& name);

/// lambda(g) = exp(-tau |g|^p), tau > 0, p in (0, 1].
struct Subexponential {
  double tau;
  double p;
  LatticeNorm norm = LatticeNorm::l2;
  bool operator==(const Subexponential&) const = default;
};

/// lambda(g) = (1 + |g|)^(-s), s > d.
struct PolynomialDecay {
  double s;
  LatticeNorm norm = LatticeNorm::l2;
  bool operator==(const PolynomialDecay&) const = default;
};

/// Values on the box |g|_inf <= radius (lexicographic, see box()), plus a
/// declared bound on the total mass outside that box. The lattice norm of a
/// custom weight is always l-inf.
struct CustomTable {
  std::int64_t radius;
  std::vector<double> values;
  std::optional<double> declared_tail;
  bool operator==(const CustomTable&) const = default;
};

using WeightFamily = std::variant<Subexponential, PolynomialDecay, CustomTable>;

/// Certified bound on the mass sum_{|g| > radius} lambda(g).
struct TailBound {
  std::int64_t radius;
  double bound;
};

class Weight {
 public:
  static Weight subexponential(std::size_t dim, double tau, double p,
                               LatticeNorm norm = LatticeNorm::l2);
  static Weight polynomial(std::size_t dim, double s, LatticeNorm norm = LatticeNorm::l2);
  /// Verifies positivity and symmetry of the table; the tail is trusted.
  static Weight custom(std::size_t dim, std::int64_t radius, std::vector<double> values,
                       std::optional<double> declared_tail);

  std::size_t dim() const { return dim_; }
  const WeightFamily& family() const { return family_; }
  LatticeNorm norm() const;
  bool is_custom() const { return std::holds_alternative<CustomTable>(family_); }

  /// False only for custom weights queried outside their table.
  bool has_value(const FreqVector& gamma) const;
  double operator()(const FreqVector& gamma) const;
  /// sqrt(lambda(g)).
  double xi(const FreqVector& gamma) const;
  /// log lambda(g), computed without underflow for catalog families.
  double log_value(const FreqVector& gamma) const;

  /// Radial profile phi with lambda(g) = phi(|g|). Catalog families only.
  double profile(double r) const;

  /// Upper bound on lambda(g) over all g with |g|_inf > r.
  double sup_beyond(double r) const;
  /// Upper bound on lambda over all of Z^d.
  double sup() const;

  TailBound tail_mass(std::int64_t radius) const;
  /// Smallest radius with tail_mass <= eps, found by doubling then bisection.
  std::int64_t truncation_radius(double eps, std::int64_t cap = std::int64_t{1} << 24) const;
  /// Certified upper bound on sum_g lambda(g).
  double total_mass_bound() const;

  /// The weight xi^2 = lambda^2 of the same family.
  Weight squared() const;

  bool operator==(const Weight& other) const;

 private:
  Weight(std::size_t dim, WeightFamily family) : dim_(dim), family_(std::move(family)) {}

  double catalog_tail(double radius) const;

  std::size_t dim_;
  WeightFamily family_;
};

double weight_eval(const Weight& w, const FreqVector& gamma);
double xi_eval(const Weight& w, const FreqVector& gamma);
TailBound tail_mass(const Weight& w, std::int64_t radius);
std::int64_t truncation_radius(const Weight& w, double eps,
                               std::int64_t cap = std::int64_t{1} << 24);

}  // namespace rkha
