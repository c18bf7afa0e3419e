#include "rkha/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rkha/errors.hpp"
#include "rkha/grid_transform.hpp"

namespace rkha {

FourierPoly::FourierPoly(Weight weight) : weight_(std::move(weight)) {}

FourierPoly::FourierPoly(Weight weight, CoeffMap coeffs)
    : weight_(std::move(weight)), coeffs_(std::move(coeffs)) {
  for (const auto& [g, c] : coeffs_) {
    if (g.dim() != weight_.dim()) throw DimensionMismatch("FourierPoly: frequency of wrong dimension");
  }
}

FourierPoly FourierPoly::unit(const Weight& weight) {
  return character(weight, FreqVector::zero(weight.dim()));
}

FourierPoly FourierPoly::character(const Weight& weight, const FreqVector& gamma, Complex c) {
  FourierPoly f(weight);
  f.set(gamma, c);
  return f;
}

FourierPoly FourierPoly::basis(const Weight& weight, const FreqVector& gamma) {
  return character(weight, gamma, weight.xi(gamma));
}

Complex FourierPoly::coeff(const FreqVector& gamma) const {
  auto it = coeffs_.find(gamma);
  return it == coeffs_.end() ? Complex{} : it->second;
}

void FourierPoly::set(const FreqVector& gamma, Complex value) {
  if (gamma.dim() != dim()) throw DimensionMismatch("FourierPoly: frequency of wrong dimension");
  coeffs_[gamma] = value;
}

void FourierPoly::add(const FreqVector& gamma, Complex value) {
  if (gamma.dim() != dim()) throw DimensionMismatch("FourierPoly: frequency of wrong dimension");
  coeffs_[gamma] += value;
}

std::int64_t FourierPoly::bandwidth() const {
  std::int64_t b = 0;
  for (const auto& [g, c] : coeffs_) b = std::max(b, g.norm_inf());
  return b;
}

FourierPoly FourierPoly::truncated(std::int64_t radius) const {
  CoeffMap out;
  for (const auto& [g, c] : coeffs_) {
    if (g.norm_inf() <= radius) out.emplace_hint(out.end(), g, c);
  }
  return FourierPoly(weight_, std::move(out));
}

bool FourierPoly::is_real(double tol) const {
  double scale = 0.0;
  for (const auto& [g, c] : coeffs_) scale = std::max(scale, std::abs(c));
  for (const auto& [g, c] : coeffs_) {
    if (std::abs(coeff(-g) - std::conj(c)) > tol * scale) return false;
  }
  return true;
}

FourierPoly FourierPoly::real_part() const {
  FourierPoly out(weight_);
  for (const auto& [g, c] : coeffs_) {
    out.add(g, 0.5 * c);
    out.add(-g, 0.5 * std::conj(c));
  }
  return out;
}

void FourierPoly::require_compatible(const FourierPoly& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("FourierPoly: dimension mismatch");
  if (!(weight_ == other.weight_)) throw WeightMismatch("FourierPoly: weight mismatch");
}

FourierPoly FourierPoly::operator+(const FourierPoly& other) const {
  require_compatible(other);
  FourierPoly out = *this;
  for (const auto& [g, c] : other.coeffs_) out.coeffs_[g] += c;
  return out;
}

FourierPoly FourierPoly::operator-(const FourierPoly& other) const {
  require_compatible(other);
  FourierPoly out = *this;
  for (const auto& [g, c] : other.coeffs_) out.coeffs_[g] -= c;
  return out;
}

FourierPoly FourierPoly::operator*(Complex scalar) const {
  FourierPoly out = *this;
  for (auto& [g, c] : out.coeffs_) c *= scalar;
  return out;
}

double hnorm(const FourierPoly& f) {
  double acc = 0.0;
  for (const auto& [g, c] : f.coeffs()) acc += std::norm(c) / f.weight()(g);
  return std::sqrt(acc);
}

Complex inner(const FourierPoly& f, const FourierPoly& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("inner: dimension mismatch");
  if (!(f.weight() == g.weight())) throw WeightMismatch("inner: weight mismatch");
  const auto& small = f.support_size() <= g.support_size() ? f : g;
  const auto& large = &small == &f ? g : f;
  Complex acc{};
  for (const auto& [gamma, c] : small.coeffs()) {
    auto it = large.coeffs().find(gamma);
    if (it == large.coeffs().end()) continue;
    const Complex fc = &small == &f ? c : it->second;
    const Complex gc = &small == &f ? it->second : c;
    acc += std::conj(fc) * gc / f.weight()(gamma);
  }
  return acc;
}

FourierPoly multiply(const FourierPoly& f, const FourierPoly& g, std::size_t cap) {
  if (f.dim() != g.dim()) throw DimensionMismatch("multiply: dimension mismatch");
  if (!(f.weight() == g.weight())) throw WeightMismatch("multiply: weight mismatch");
  FourierPoly out(f.weight());
  if (f.coeffs().empty() || g.coeffs().empty()) return out;
  const std::size_t d = f.dim();

  // Dense accumulator over the Minkowski sum of the bounding boxes.
  auto bounds = [d](const FourierPoly& p) {
    std::vector<std::int64_t> lo(d, std::numeric_limits<std::int64_t>::max());
    std::vector<std::int64_t> hi(d, std::numeric_limits<std::int64_t>::min());
    for (const auto& [gamma, c] : p.coeffs()) {
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], gamma[i]);
        hi[i] = std::max(hi[i], gamma[i]);
      }
    }
    return std::pair{lo, hi};
  };
  const auto [flo, fhi] = bounds(f);
  const auto [glo, ghi] = bounds(g);
  std::vector<std::int64_t> lo(d), ext(d), stride(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = flo[i] + glo[i];
    ext[i] = (fhi[i] + ghi[i]) - lo[i] + 1;
    if (total > cap / static_cast<std::size_t>(ext[i])) {
      throw ResourceError("multiply: product support exceeds the size cap");
    }
    total *= static_cast<std::size_t>(ext[i]);
  }
  std::size_t s = 1;
  for (std::size_t i = d; i-- > 0;) {
    stride[i] = static_cast<std::int64_t>(s);
    s *= static_cast<std::size_t>(ext[i]);
  }

  auto offsets = [&](const FourierPoly& p, const std::vector<std::int64_t>& base) {
    std::vector<std::pair<std::int64_t, Complex>> out_terms;
    out_terms.reserve(p.support_size());
    for (const auto& [gamma, c] : p.coeffs()) {
      std::int64_t off = 0;
      for (std::size_t i = 0; i < d; ++i) off += (gamma[i] - base[i]) * stride[i];
      out_terms.emplace_back(off, c);
    }
    return out_terms;
  };
  const auto fterms = offsets(f, flo);
  const auto gterms = offsets(g, glo);

  std::vector<Complex> acc(total);
  std::vector<unsigned char> touched(total, 0);
  for (const auto& [fo, fc] : fterms) {
    for (const auto& [go, gc] : gterms) {
      const auto k = static_cast<std::size_t>(fo + go);
      acc[k] += fc * gc;
      touched[k] = 1;
    }
  }

  FourierPoly::CoeffMap coeffs;
  std::vector<std::int64_t> idx(d);
  for (std::size_t k = 0; k < total; ++k) {
    if (!touched[k]) continue;
    std::size_t rem = k;
    for (std::size_t i = 0; i < d; ++i) {
      idx[i] = lo[i] + static_cast<std::int64_t>(rem / static_cast<std::size_t>(stride[i]));
      rem %= static_cast<std::size_t>(stride[i]);
    }
    coeffs.emplace_hint(coeffs.end(), FreqVector(idx), acc[k]);
  }
  return FourierPoly(f.weight(), std::move(coeffs));
}

FourierPoly involution(const FourierPoly& f) {
  FourierPoly::CoeffMap out;
  for (const auto& [g, c] : f.coeffs()) out.emplace(-g, std::conj(c));
  return FourierPoly(f.weight(), std::move(out));
}

Complex evaluate(const FourierPoly& f, const TorusPoint& x) {
  if (x.dim() != f.dim()) throw DimensionMismatch("evaluate: dimension mismatch");
  Complex acc{};
  for (const auto& [g, c] : f.coeffs()) acc += c * character_eval(g, x);
  return acc;
}

std::vector<Complex> sample_on_grid(const FourierPoly& f, std::size_t n) {
  GridSpectrum spec(n, f.dim());
  for (const auto& [g, c] : f.coeffs()) spec.accumulate(g, c);
  return spec.synthesize();
}

FourierPoly from_grid_samples(const Weight& weight, const std::vector<Complex>& samples,
                              std::size_t n, std::int64_t radius) {
  if (static_cast<std::int64_t>(n) < 2 * radius + 1) {
    throw InvalidArgument("from_grid_samples: grid too coarse for the requested radius");
  }
  const auto spec = GridSpectrum::analyze(samples, n, weight.dim());
  double scale = 0.0;
  for_each_in_box(weight.dim(), radius,
                  [&](const FreqVector& g) { scale = std::max(scale, std::abs(spec.bin(g))); });
  // Bins below double rounding of the largest one are transform noise.
  FourierPoly out(weight);
  for_each_in_box(weight.dim(), radius, [&](const FreqVector& g) {
    const Complex c = spec.bin(g);
    if (std::abs(c) > 1e-16 * scale) out.set(g, c);
  });
  return out;
}

double banach_constant(const Weight& w, const ConvolutionReport& report) {
  if (report.verdict != Verdict::certified_bounded) {
    throw Inconclusive("banach_constant: convolution report is not certified");
  }
  // C >= (lambda * lambda)(0) / lambda(0) >= lambda(0) for the weight the report describes.
  if (report.constant < w(FreqVector::zero(w.dim())) * (1.0 - 1e-12)) {
    throw InvalidArgument("banach_constant: report does not belong to this weight");
  }
  return std::sqrt(report.constant);
}

std::size_t check_grid_size(const FourierPoly& f, std::int64_t bandwidth,
                            const SolverOptions& options) {
  const std::int64_t b = std::max(f.bandwidth(), bandwidth);
  return std::max<std::size_t>(
      16, next_pow2(options.oversampling * static_cast<std::size_t>(2 * b + 1)));
}

double grid_min_real(const FourierPoly& f, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : sample_on_grid(f, n)) m = std::min(m, v.real());
  return m;
}

double grid_min_abs(const FourierPoly& f, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : sample_on_grid(f, n)) m = std::min(m, std::abs(v));
  return m;
}

namespace {

// Damped fixed-point refinement shared by the solvers: repeatedly proposes a
// step, halves it while the residual does not drop, and keeps the best iterate.
template <class Defect, class Step, class Project>
AlgebraResult refine(FourierPoly g, double tol, const SolverOptions& options, Defect defect,
                     Step step_of, Project project) {
  FourierPoly e = defect(g);
  double res = hnorm(e);
  int it = 0;
  while (it < options.max_iterations && res > tol) {
    const FourierPoly step = step_of(g, e);
    double t = 1.0;
    bool improved = false;
    for (int h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
      FourierPoly cand = project(g + step * t);
      FourierPoly e2 = defect(cand);
      const double r2 = hnorm(e2);
      if (r2 < res) {
        const bool stalled = res - r2 <= 1e-12 * res;
        g = std::move(cand);
        e = std::move(e2);
        res = r2;
        improved = !stalled;
        break;
      }
    }
    ++it;
    if (!improved) break;
  }
  return AlgebraResult{std::move(g), res, it, res <= tol};
}

}  // namespace

AlgebraResult invert(const FourierPoly& f, std::int64_t bandwidth, double tol,
                     const SolverOptions& options) {
  if (bandwidth < 0) throw InvalidArgument("invert: bandwidth must be nonnegative");
  const Weight& w = f.weight();
  const std::size_t n = check_grid_size(f, bandwidth, options);
  auto samples = sample_on_grid(f, n);
  double fmin = std::numeric_limits<double>::infinity();
  for (const auto& v : samples) fmin = std::min(fmin, std::abs(v));
  if (!(fmin >= options.vanishing_threshold)) {
    throw NotInvertible("invert: |f| falls below the vanishing threshold on the check grid");
  }
  for (auto& v : samples) v = 1.0 / v;
  FourierPoly g = from_grid_samples(w, samples, n, bandwidth);

  const FourierPoly one = FourierPoly::unit(w);
  auto defect = [&](const FourierPoly& h) { return one - multiply(f, h); };
  auto step = [&](const FourierPoly& h, const FourierPoly& e) {
    return multiply(h, e).truncated(bandwidth);
  };
  auto identity = [](FourierPoly h) { return h; };
  return refine(std::move(g), tol, options, defect, step, identity);
}

AlgebraResult sqrt_positive(const FourierPoly& f, std::int64_t bandwidth, double tol,
                            const SolverOptions& options) {
  if (bandwidth < 0) throw InvalidArgument("sqrt_positive: bandwidth must be nonnegative");
  if (!f.is_real()) throw DomainError("sqrt_positive: f is not real-valued");
  const Weight& w = f.weight();
  const std::size_t n = check_grid_size(f, bandwidth, options);
  auto samples = sample_on_grid(f, n);
  for (auto& v : samples) {
    if (!(v.real() > options.vanishing_threshold)) {
      throw DomainError("sqrt_positive: f is not strictly positive on the check grid");
    }
    v = std::sqrt(v.real());
  }
  FourierPoly g = from_grid_samples(w, samples, n, bandwidth).real_part();

  auto defect = [&](const FourierPoly& h) { return f - multiply(h, h); };
  // Quasi-Newton: g <- g + (f - g^2) / (2 g), with 1/g from the inverse solver.
  auto step = [&](const FourierPoly& h, const FourierPoly& e) {
    SolverOptions inner_opts = options;
    inner_opts.max_iterations = 20;
    const FourierPoly recip = invert(h, bandwidth, tol * 1e-2, inner_opts).value;
    return multiply(recip, e).truncated(bandwidth) * 0.5;
  };
  auto project = [](FourierPoly h) { return h.real_part(); };
  AlgebraResult result = refine(std::move(g), tol, options, defect, step, project);
  if (!(grid_min_real(result.value, n) > 0.0)) result.converged = false;
  return result;
}

SpectrumProbe spectrum_probe(const FourierPoly& f, Complex z, std::int64_t bandwidth, double tol,
                             const SolverOptions& options, double range_threshold) {
  SpectrumProbe probe;
  probe.z = z;
  probe.residual = std::numeric_limits<double>::infinity();
  const FourierPoly shifted = f - FourierPoly::unit(f.weight()) * z;
  const std::size_t n = check_grid_size(shifted, bandwidth, options);
  if (grid_min_abs(shifted, n) < range_threshold) {
    probe.reason = "on-sampled-range";
    return probe;
  }
  try {
    const AlgebraResult r = invert(shifted, bandwidth, tol, options);
    probe.invertible = r.converged;
    probe.residual = r.residual;
    probe.reason = r.converged ? "inverted" : "not-converged";
  } catch (const NotInvertible&) {
    probe.reason = "not-invertible";
  }
  return probe;
}

}  // namespace rkha
