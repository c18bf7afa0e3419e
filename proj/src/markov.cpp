#include "rkha/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rkha/errors.hpp"
#include "rkha/kernel.hpp"

namespace rkha {

namespace {

std::size_t table_index(std::int64_t radius, const FreqVector& g) {
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < g.dim(); ++i) idx = idx * side + static_cast<std::size_t>(g[i] + radius);
  return idx;
}

}  // namespace

MarkovFamily MarkovFamily::catalog(std::size_t dim, double p, LatticeNorm norm) {
  if (dim == 0) throw InvalidArgument("markov: dimension must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("markov: p must lie in (0, 1]");
  MarkovFamily fam;
  fam.dim_ = dim;
  fam.p_ = p;
  fam.norm_ = norm;
  return fam;
}

MarkovFamily MarkovFamily::custom(std::size_t dim, std::int64_t radius, std::vector<double> eta,
                                  std::function<double(double)> tail) {
  if (dim == 0) throw InvalidArgument("markov: dimension must be positive");
  if (eta.size() != box_size(dim, radius)) throw InvalidArgument("markov: eta table size mismatch");
  if (!tail) throw InvalidArgument("markov: custom generator needs a tail certificate");
  for_each_in_box(dim, radius, [&](const FreqVector& g) {
    const double v = eta[table_index(radius, g)];
    if (g.is_zero() ? v != 0.0 : !(v > 0.0)) {
      throw InvalidArgument("markov: eta must vanish exactly at the origin and be positive elsewhere");
    }
    if (v != eta[table_index(radius, -g)]) throw InvalidArgument("markov: eta must be symmetric");
  });
  MarkovFamily fam;
  fam.dim_ = dim;
  fam.norm_ = LatticeNorm::linf;
  fam.radius_ = radius;
  fam.table_ = std::make_shared<const std::vector<double>>(std::move(eta));
  fam.tail_ = std::move(tail);
  return fam;
}

double MarkovFamily::eta(const FreqVector& gamma) const {
  if (gamma.dim() != dim_) throw DimensionMismatch("markov: dimension mismatch");
  if (table_) {
    if (gamma.norm_inf() > radius_) throw Unsupported("markov: eta queried outside its table");
    return (*table_)[table_index(radius_, gamma)];
  }
  return std::pow(lattice_norm(gamma, norm_), p_);
}

Weight MarkovFamily::weight_at(double tau) const {
  if (!(tau > 0.0)) throw InvalidArgument("markov: tau must be positive");
  if (!table_) return Weight::subexponential(dim_, tau, p_, norm_);
  std::vector<double> values(table_->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::exp(-tau * (*table_)[i]);
  return Weight::custom(dim_, radius_, std::move(values), tail_(tau));
}

Weight weight_at(const MarkovFamily& fam, double tau) { return fam.weight_at(tau); }

const char* to_string(Positivity p) {
  switch (p) {
    case Positivity::certified_positive:
      return "certified-positive";
    case Positivity::positive_within_truncation:
      return "positive-within-truncation";
    case Positivity::negative:
      return "negative";
  }
  return "negative";
}

MarkovReport markov_checks(const MarkovFamily& fam, double tau, std::size_t grid,
                           std::int64_t radius, double tau_prime) {
  if (!(tau_prime > 0.0)) throw InvalidArgument("markov: tau' must be positive");
  MarkovReport out;
  out.tau = tau;
  out.tau_prime = tau_prime;
  const Weight w = fam.weight_at(tau);
  const TorusPoint origin = TorusPoint::identity(fam.dim());
  const FourierPoly section = section_as_poly(w, origin, radius);

  // The zero coefficient of k_tau(x, .) is its Haar integral.
  out.mass_defect = std::abs(section.coeff(FreqVector::zero(fam.dim())) - 1.0);

  // k_tau(x, y) = l_tau(x - y): translation invariance reduces the grid
  // minimum over (x, y) to the minimum of l_tau over the grid.
  out.grid_min = grid_min_real(section, grid);
  out.tail = w.tail_mass(radius).bound;
  if (out.grid_min > out.tail) {
    out.positivity = Positivity::certified_positive;
  } else if (out.grid_min >= -out.tail - 1e-9) {
    out.positivity = Positivity::positive_within_truncation;
  } else {
    out.positivity = Positivity::negative;
  }

  const Weight wp = fam.weight_at(tau_prime);
  const Weight wsum = fam.weight_at(tau + tau_prime);
  for_each_in_box(fam.dim(), radius, [&](const FreqVector& g) {
    if (!w.has_value(g)) return;
    out.semigroup_defect = std::max(out.semigroup_defect, std::abs(w(g) * wp(g) - wsum(g)));
  });
  return out;
}

MarkovSweep markov_subconvolutivity_sweep(const MarkovFamily& fam, const std::vector<double>& taus,
                                          std::int64_t window, const ReportOptions& options) {
  MarkovSweep out;
  out.taus = taus;
  bool all = !taus.empty();
  for (double tau : taus) {
    const Weight w = fam.weight_at(tau);
    const Weight half = fam.weight_at(tau / 2.0);
    for_each_in_box(fam.dim(), window, [&](const FreqVector& g) {
      if (!w.has_value(g)) return;
      out.xi_identity_error = std::max(out.xi_identity_error, std::abs(w.xi(g) - half(g)));
    });
    out.reports.push_back(subconvolutivity_report(w, window, options));
    all = all && out.reports.back().verdict == Verdict::certified_bounded;
  }
  out.verdict = all ? Verdict::certified_bounded : Verdict::inconclusive;
  return out;
}

GeneratorSpectrum generator_eigs(const MarkovFamily& fam, std::int64_t radius) {
  GeneratorSpectrum out;
  const Weight w1 = fam.weight_at(1.0);
  const Weight w2 = fam.weight_at(2.0);
  std::size_t zeros = 0;
  for_each_in_box(fam.dim(), radius, [&](const FreqVector& g) {
    const double e = fam.eta(g);
    out.eigs.emplace_back(g, e);
    if (e == 0.0) ++zeros;
    for (const auto& [w, tau] : {std::pair{&w1, 1.0}, std::pair{&w2, 2.0}}) {
      const double lam = (*w)(g);
      if (lam <= std::numeric_limits<double>::min()) continue;
      out.tau_dependence = std::max(out.tau_dependence, std::abs(-std::log(lam) / tau - e));
    }
  });
  out.simple_zero = zeros == 1 && fam.eta(FreqVector::zero(fam.dim())) == 0.0;
  return out;
}

}  // namespace rkha
