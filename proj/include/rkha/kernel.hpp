#pragma once

// Translation-invariant kernels k(x, y) = l(x - y) with l(x) = sum lambda(g) g(x).
//
// l is an infinite series; everything here sums over the box |g|_inf <= R and
// reports the discarded mass tail_mass(R), plus a floating-point summation
// allowance, as a certified error.

#include <cstdint>

#include "rkha/algebra.hpp"
#include "rkha/torus.hpp"
#include "rkha/weights.hpp"

namespace rkha {

struct Certified {
  double value;
  /// |true value - value| <= error.
  double error;
};

Certified shape_function(const Weight& w, const TorusPoint& x, std::int64_t radius);
Certified kernel_eval(const Weight& w, const TorusPoint& x, const TorusPoint& y,
                      std::int64_t radius);

/// sum_{|g|_inf <= R} conj(psi_g(x)) psi_g(y) with psi_g = xi(g) g; the same
/// truncated kernel as kernel_eval, through the orthonormal basis.
Complex mercer_kernel(const Weight& w, const TorusPoint& x, const TorusPoint& y,
                      std::int64_t radius);

/// k(x, .) truncated to the box: coefficients lambda(g) g(-x).
FourierPoly section_as_poly(const Weight& w, const TorusPoint& x, std::int64_t radius);

/// The kernel integral operator K g = lambda(g) g, applied with the weight w
/// (which may differ from the weight f's norm is taken in).
FourierPoly apply_K(const Weight& w, const FourierPoly& f);

struct GelfandCheck {
  /// Largest sup/hnorm ratio over all candidates.
  double max_ratio = 0.0;
  /// Ratio of the normalized kernel section at the identity.
  double section_ratio = 0.0;
  /// sqrt of the truncated l(0).
  double truncated_norm = 0.0;
  /// sqrt(l(0) + tail) (1 + 1e-9): no candidate may exceed this.
  double bound = 0.0;
  std::size_t grid = 0;
  std::size_t trials = 0;
};

/// Sup-norm over hnorm for `trials` random elements supported in the box
/// plus the normalized kernel section at the identity. Sup norms are taken on
/// a grid oversampled 4x, which contains the identity as a node.
GelfandCheck gelfand_norm_check(const Weight& w, std::int64_t radius, std::size_t trials,
                                std::uint64_t seed = 0);

}  // namespace rkha
