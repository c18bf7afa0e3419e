#include "rkha/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rkha/errors.hpp"
#include "rkha/grid_transform.hpp"

namespace rkha {

Certified shape_function(const Weight& w, const TorusPoint& x, std::int64_t radius) {
  if (x.dim() != w.dim()) throw DimensionMismatch("shape_function: dimension mismatch");
  if (radius < 0) throw InvalidArgument("shape_function: radius must be nonnegative");
  Complex acc{};
  double mass = 0.0;
  std::size_t terms = 0;
  for_each_in_box(w.dim(), radius, [&](const FreqVector& g) {
    if (!w.has_value(g)) return;
    const double lam = w(g);
    acc += lam * character_eval(g, x);
    mass += lam;
    ++terms;
  });
  // Symmetric weights give a real series; the imaginary part is pure rounding.
  if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, mass)) {
    throw Error("shape_function: imaginary part exceeds rounding level");
  }
  // Recursive summation error is at most (n + 2) eps sum |terms|.
  const double rounding = static_cast<double>(terms + 2) * std::numeric_limits<double>::epsilon() * mass;
  return {acc.real(), w.tail_mass(radius).bound + rounding};
}

Certified kernel_eval(const Weight& w, const TorusPoint& x, const TorusPoint& y,
                      std::int64_t radius) {
  return shape_function(w, x - y, radius);
}

Complex mercer_kernel(const Weight& w, const TorusPoint& x, const TorusPoint& y,
                      std::int64_t radius) {
  if (x.dim() != w.dim() || y.dim() != w.dim()) {
    throw DimensionMismatch("mercer_kernel: dimension mismatch");
  }
  Complex acc{};
  for_each_in_box(w.dim(), radius, [&](const FreqVector& g) {
    if (!w.has_value(g)) return;
    const double xi = w.xi(g);
    const Complex psi_x = xi * character_eval(g, x);
    const Complex psi_y = xi * character_eval(g, y);
    acc += std::conj(psi_x) * psi_y;
  });
  return acc;
}

FourierPoly section_as_poly(const Weight& w, const TorusPoint& x, std::int64_t radius) {
  if (x.dim() != w.dim()) throw DimensionMismatch("section_as_poly: dimension mismatch");
  FourierPoly::CoeffMap coeffs;
  const TorusPoint minus_x = -x;
  for_each_in_box(w.dim(), radius, [&](const FreqVector& g) {
    if (!w.has_value(g)) return;
    coeffs.emplace_hint(coeffs.end(), g, w(g) * character_eval(g, minus_x));
  });
  return FourierPoly(w, std::move(coeffs));
}

FourierPoly apply_K(const Weight& w, const FourierPoly& f) {
  if (w.dim() != f.dim()) throw DimensionMismatch("apply_K: dimension mismatch");
  FourierPoly::CoeffMap out;
  for (const auto& [g, c] : f.coeffs()) out.emplace_hint(out.end(), g, w(g) * c);
  return FourierPoly(f.weight(), std::move(out));
}

GelfandCheck gelfand_norm_check(const Weight& w, std::int64_t radius, std::size_t trials,
                                std::uint64_t seed) {
  if (radius < 0) throw InvalidArgument("gelfand_norm_check: radius must be nonnegative");
  GelfandCheck out;
  out.grid = std::max<std::size_t>(16, next_pow2(4 * static_cast<std::size_t>(2 * radius + 1)));
  out.trials = trials;

  const TorusPoint origin = TorusPoint::identity(w.dim());
  const Certified l0 = shape_function(w, origin, radius);
  out.truncated_norm = std::sqrt(l0.value);
  out.bound = std::sqrt(l0.value + l0.error) * (1.0 + 1e-9);

  auto ratio = [&](const FourierPoly& f) {
    double sup = 0.0;
    for (const auto& v : sample_on_grid(f, out.grid)) sup = std::max(sup, std::abs(v));
    return sup / hnorm(f);
  };

  const FourierPoly section = section_as_poly(w, origin, radius);
  out.section_ratio = ratio(section * (1.0 / hnorm(section)));
  out.max_ratio = out.section_ratio;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto support = box(w.dim(), radius);
  for (std::size_t t = 0; t < trials; ++t) {
    FourierPoly::CoeffMap coeffs;
    for (const auto& g : support) {
      if (!w.has_value(g)) continue;
      // Scale by xi so that high frequencies are not negligible in H_lambda.
      coeffs.emplace_hint(coeffs.end(), g, w.xi(g) * Complex(normal(rng), normal(rng)));
    }
    out.max_ratio = std::max(out.max_ratio, ratio(FourierPoly(w, std::move(coeffs))));
  }
  return out;
}

}  // namespace rkha
