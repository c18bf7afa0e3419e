#include "rkha/embedding.hpp"

#include <cmath>

#include "rkha/errors.hpp"
#include "rkha/kernel.hpp"

namespace rkha {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("AtomicMeasure: no atoms");
  double total = 0.0;
  for (const auto& [x, m] : atoms_) {
    if (x.dim() != atoms_.front().first.dim()) {
      throw DimensionMismatch("AtomicMeasure: atoms of different dimension");
    }
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("AtomicMeasure: masses must be positive");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("AtomicMeasure: masses must sum to 1");
}

AtomicMeasure AtomicMeasure::dirac(const TorusPoint& x) { return AtomicMeasure({{x, 1.0}}); }

AtomicMeasure AtomicMeasure::mixture(const AtomicMeasure& a, const AtomicMeasure& b, double t) {
  if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("AtomicMeasure: mixture weight must lie in (0, 1)");
  std::vector<Atom> atoms;
  for (const auto& [x, m] : a.atoms()) atoms.emplace_back(x, t * m);
  for (const auto& [x, m] : b.atoms()) atoms.emplace_back(x, (1.0 - t) * m);
  return AtomicMeasure(std::move(atoms));
}

AtomicMeasure AtomicMeasure::uniform_grid(std::size_t n, std::size_t dim) {
  const Grid grid(n, dim);
  std::vector<Atom> atoms;
  atoms.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) atoms.emplace_back(grid.point(i), grid.weight());
  return AtomicMeasure(std::move(atoms));
}

FourierPoly mean_embed(const AtomicMeasure& nu, const Weight& w, std::int64_t radius) {
  if (nu.dim() != w.dim()) throw DimensionMismatch("mean_embed: dimension mismatch");
  FourierPoly::CoeffMap coeffs;
  for_each_in_box(w.dim(), radius, [&](const FreqVector& g) {
    if (!w.has_value(g)) return;
    Complex acc{};
    const FreqVector minus_g = -g;
    for (const auto& [x, m] : nu.atoms()) acc += m * character_eval(minus_g, x);
    coeffs.emplace_hint(coeffs.end(), g, w(g) * acc);
  });
  return FourierPoly(w, std::move(coeffs));
}

Expectation expect(const AtomicMeasure& nu, const FourierPoly& f, std::int64_t radius) {
  if (f.bandwidth() > radius) throw InvalidArgument("expect: support exceeds the embedding box");
  Expectation out{};
  for (const auto& [x, m] : nu.atoms()) out.direct += m * evaluate(f, x);
  out.embedded = inner(mean_embed(nu, f.weight(), radius), f);
  return out;
}

double mmd(const AtomicMeasure& nu1, const AtomicMeasure& nu2, const Weight& w,
           std::int64_t radius) {
  return hnorm(mean_embed(nu1, w, radius) - mean_embed(nu2, w, radius));
}

StateValue state_rho(const TorusPoint& x, const FourierPoly& f, std::int64_t radius) {
  if (f.bandwidth() > radius) throw InvalidArgument("state_rho: support exceeds the basis box");
  const Weight& w = f.weight();
  StateValue out{};
  out.exact = inner(section_as_poly(w, x, radius), f);

  const FourierPoly section = section_as_poly(w, x, 2 * radius);
  const double kxx = std::pow(hnorm(section), 2);
  for_each_in_box(w.dim(), radius, [&](const FreqVector& g) {
    if (!w.has_value(g)) return;
    const FourierPoly psi = FourierPoly::basis(w, g);
    // Pi_x h = h(x) k(x, .) / k(x, x)
    const Complex fpsi_x = evaluate(multiply(f, psi), x);
    out.trace += fpsi_x * inner(psi, section) / kxx;
  });

  const double l_trunc = shape_function(w, TorusPoint::identity(w.dim()), radius).value;
  double coeff_mass = 0.0;
  for (const auto& [g, c] : f.coeffs()) coeff_mass += std::abs(c);
  out.bound = std::abs(out.exact) * w.tail_mass(radius).bound / l_trunc +
              1e-13 * coeff_mass * static_cast<double>(box_size(w.dim(), radius));
  return out;
}

}  // namespace rkha
