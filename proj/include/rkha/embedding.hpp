#pragma once

// Kernel mean embeddings of atomic probability measures on T^d, the induced
// MMD metric, and the rank-one states rho_x = tr(Pi_x .) on B(H_lambda).

#include <cstdint>
#include <utility>
#include <vector>

#include "rkha/algebra.hpp"
#include "rkha/torus.hpp"
#include "rkha/weights.hpp"

namespace rkha {

/// Finite convex combination of Dirac masses.
class AtomicMeasure {
 public:
  using Atom = std::pair<TorusPoint, double>;

  /// Masses must be positive and sum to 1 within 1e-12.
  explicit AtomicMeasure(std::vector<Atom> atoms);

  static AtomicMeasure dirac(const TorusPoint& x);
  /// t a + (1 - t) b, t in (0, 1).
  static AtomicMeasure mixture(const AtomicMeasure& a, const AtomicMeasure& b, double t);
  /// Uniform masses on the n-per-dimension grid (grid atomization of Haar measure).
  static AtomicMeasure uniform_grid(std::size_t n, std::size_t dim);

  std::size_t dim() const { return atoms_.front().first.dim(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;
};

/// R(nu)^(g) = lambda(g) sum_j w_j g(-x_j) for |g|_inf <= radius.
FourierPoly mean_embed(const AtomicMeasure& nu, const Weight& w, std::int64_t radius);

struct Expectation {
  /// sum_j w_j f(x_j).
  Complex direct;
  /// <R(nu), f> with R(nu) truncated to the given radius.
  Complex embedded;
};

/// Throws InvalidArgument when supp f exceeds the embedding box.
Expectation expect(const AtomicMeasure& nu, const FourierPoly& f, std::int64_t radius);

/// ||R(nu1) - R(nu2)|| in H_lambda, embeddings truncated to the box.
double mmd(const AtomicMeasure& nu1, const AtomicMeasure& nu2, const Weight& w,
           std::int64_t radius);

struct StateValue {
  /// rho_x(pi(f)) = f(x) through the reproducing identity.
  Complex exact;
  /// sum over |g|_inf <= radius of <psi_g, Pi_x (f psi_g)>, with Pi_x built
  /// from the kernel section truncated at 2 * radius.
  Complex trace;
  /// |f(x)| tail(radius) / l_radius(0) plus rounding: bound on |exact - trace|.
  double bound;
};

StateValue state_rho(const TorusPoint& x, const FourierPoly& f, std::int64_t radius);

}  // namespace rkha
