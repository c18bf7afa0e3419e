// Acceptance runner: one PASS/FAIL line per criterion. With no arguments
// every criterion runs; otherwise only the listed ids.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rkha/algebra.hpp"
#include "rkha/embedding.hpp"
#include "rkha/errors.hpp"
#include "rkha/kernel.hpp"
#include "rkha/markov.hpp"
#include "rkha/weight_analysis.hpp"
#include "rkha/weights.hpp"

using namespace rkha;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Weight kW1 = Weight::subexponential(1, 1.0, 0.5);
const Weight kW2 = Weight::subexponential(2, 1.0, 0.5);

double relative_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Outcome criterion_1a() {
  const auto rep = subconvolutivity_report(kW1, 32);
  const auto& h = rep.history;
  double last = 1.0;
  double prev = 1.0;
  if (h.size() >= 3) {
    last = relative_change(h[h.size() - 1].second, h[h.size() - 2].second);
    prev = relative_change(h[h.size() - 2].second, h[h.size() - 3].second);
  }
  const bool ok = rep.verdict == Verdict::certified_bounded && last < 1e-6 && prev < 1e-6;
  return {ok, fmt("subconvolutivity window 32: verdict %s, C = %.12g at R = %lld, last relative changes %.2e, %.2e",
                  to_string(rep.verdict), rep.constant, static_cast<long long>(rep.radius), prev, last)};
}

Outcome criterion_1b() {
  const auto a = subadditivity_report(kW1, 32);
  const auto b = subadditivity_report(kW1, 64);
  const double change = relative_change(a.constant, b.constant);
  const bool ok = std::isfinite(b.constant) && change < 1e-6;
  return {ok, fmt("subadditivity of 1/lambda: C(32) = %.6g, C(64) = %.6g, relative change %.3g (needs < 1e-6)",
                  a.constant, b.constant, change)};
}

Outcome criterion_2() {
  const auto rep = subconvolutivity_report(kW1, 16);
  const double bound = banach_constant(kW1, rep);
  std::mt19937_64 rng(2002);
  std::size_t violations = 0;
  double worst = 0.0;
  double involution_defect = 0.0;
  const int pairs = 1000;
  for (int t = 0; t < pairs; ++t) {
    const double density = (t % 3 == 0) ? 1.0 : (t % 3 == 1 ? 0.3 : 0.05);
    const auto f = oracle::random_poly(kW1, 8, rng, density);
    const auto g = oracle::random_poly(kW1, 8, rng, density);
    const double ratio = hnorm(multiply(f, g)) / (hnorm(f) * hnorm(g));
    worst = std::max(worst, ratio);
    if (ratio > bound) ++violations;
    for (const auto* h : {&f, &g}) {
      involution_defect = std::max(involution_defect, std::abs(hnorm(involution(*h)) - hnorm(*h)) / hnorm(*h));
    }
  }
  const bool ok = rep.verdict == Verdict::certified_bounded && violations == 0 && involution_defect <= 1e-12;
  return {ok, fmt("%d pairs, radius 8: max ||fg||/(||f|| ||g||) = %.6g vs sqrt(C) = %.6g, %zu violations; "
                  "involution defect %.2e",
                  pairs, worst, bound, violations, involution_defect)};
}

Outcome criterion_3() {
  std::mt19937_64 rng(3003);
  double repro = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const bool two = t % 4 == 3;
    const auto& w = two ? kW2 : kW1;
    const std::int64_t R = two ? 6 : 16;
    const auto f = oracle::random_poly(w, R, rng, 0.5);
    const auto x = oracle::random_point(w.dim(), rng);
    repro = std::max(repro, std::abs(inner(section_as_poly(w, x, R), f) - oracle::evaluate(f, x)));
  }
  double mercer = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const bool two = t % 4 == 3;
    const auto& w = two ? kW2 : kW1;
    const std::int64_t R = two ? 8 : 32;
    const auto x = oracle::random_point(w.dim(), rng);
    const auto y = oracle::random_point(w.dim(), rng);
    mercer = std::max(mercer, std::abs(mercer_kernel(w, x, y, R) - kernel_eval(w, x, y, R).value));
  }
  return {repro <= 1e-11 && mercer <= 1e-11,
          fmt("max |<k(x,.), f> - f(x)| = %.2e over 1000 pairs; max Mercer two-path gap = %.2e", repro, mercer)};
}

Outcome criterion_4() {
  std::size_t checked = 0;
  std::size_t bad = 0;
  for (const auto* w : {&kW1, &kW2}) {
    for_each_in_box(w->dim(), 32, [&](const FreqVector& g) {
      const auto k = apply_K(*w, FourierPoly::character(*w, g));
      ++checked;
      if (k.support_size() != 1 || k.coeff(g) != Complex((*w)(g))) ++bad;
    });
  }
  return {bad == 0, fmt("%zu characters in box 32 (d = 1, 2): %zu differ from lambda(g) g", checked, bad)};
}

Outcome criterion_5() {
  bool ok = true;
  std::string detail;
  for (const auto& [w, R] : {std::pair{&kW1, std::int64_t{16}}, std::pair{&kW2, std::int64_t{6}}}) {
    const auto c = gelfand_norm_check(*w, R, 1000, 5005);
    const double gap = std::abs(c.section_ratio - c.truncated_norm) / c.truncated_norm;
    ok = ok && gap <= 1e-9 && c.max_ratio <= c.bound;
    detail += fmt("%sd = %zu: section ratio %.12g vs sqrt(l(0)) %.12g (rel %.1e), max candidate %.6g <= %.6g",
                  detail.empty() ? "" : "; ", w->dim(), c.section_ratio, c.truncated_norm, gap, c.max_ratio, c.bound);
  }
  return {ok, detail};
}

FourierPoly poly(const Weight& w, std::initializer_list<std::pair<FreqVector, Complex>> terms) {
  FourierPoly f(w);
  for (const auto& [g, c] : terms) f.add(g, c);
  return f;
}

struct Probed {
  std::size_t off = 0;
  std::size_t off_ok = 0;
  std::size_t on = 0;
  std::size_t on_rejected = 0;
  double worst_residual = 0.0;
};

Probed probe_function(const FourierPoly& f) {
  Probed out;
  const std::size_t fine = f.dim() == 1 ? 4096 : 256;
  const auto range = sample_on_grid(f, fine);
  double re_lo = 1e300, re_hi = -1e300, im_lo = 1e300, im_hi = -1e300;
  for (const auto& v : range) {
    re_lo = std::min(re_lo, v.real());
    re_hi = std::max(re_hi, v.real());
    im_lo = std::min(im_lo, v.imag());
    im_hi = std::max(im_hi, v.imag());
  }
  auto distance = [&](Complex z) {
    double d = 1e300;
    for (const auto& v : range) d = std::min(d, std::abs(v - z));
    return d;
  };
  // Lattice over the range's bounding box widened by 0.3, kept at distance >= 0.1.
  const int n = 13;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex z(re_lo - 0.3 + (re_hi - re_lo + 0.6) * i / (n - 1), im_lo - 0.3 + (im_hi - im_lo + 0.6) * j / (n - 1));
      if (distance(z) < 0.1) continue;
      ++out.off;
      for (std::int64_t B : {16, 32, 64}) {
        const auto p = spectrum_probe(f, z, B, 1e-8);
        if (p.invertible && p.residual <= 1e-8) {
          ++out.off_ok;
          out.worst_residual = std::max(out.worst_residual, p.residual);
          break;
        }
      }
    }
  }
  // Values of f at 8 nodes shared by every check grid.
  const std::size_t m = check_grid_size(f, 64);
  const Grid grid(m, f.dim());
  const auto values = sample_on_grid(f, m);
  for (std::size_t k = 0; k < 8; ++k) {
    std::size_t idx = 0;
    for (std::size_t d = 0; d < f.dim(); ++d) idx = idx * m + (k * m / 8 + d * m / 4) % m;
    const Complex z = values[idx];
    ++out.on;
    bool rejected = true;
    for (std::int64_t B : {16, 32, 64}) rejected = rejected && !spectrum_probe(f, z, B, 1e-8).invertible;
    if (rejected) ++out.on_rejected;
  }
  return out;
}

Outcome criterion_6() {
  using G = FreqVector;
  const Complex i(0.0, 1.0);
  const std::vector<std::pair<std::string, FourierPoly>> catalog = {
      {"1 + 0.25 cos", poly(kW1, {{G{0}, 1.0}, {G{1}, 0.125}, {G{-1}, 0.125}})},
      {"0.15 chi_1", poly(kW1, {{G{1}, 0.15}})},
      {"0.1 cos + 0.05 sin 2", poly(kW1, {{G{1}, 0.05}, {G{-1}, 0.05}, {G{2}, -0.025 * i}, {G{-2}, 0.025 * i}})},
      {"0.1 (cos x1 + cos x2)", poly(kW2, {{G{1, 0}, 0.05}, {G{-1, 0}, 0.05}, {G{0, 1}, 0.05}, {G{0, -1}, 0.05}})},
      {"0.15 chi_1 + 0.03 chi_-2", poly(kW1, {{G{1}, 0.15}, {G{-2}, 0.03}})},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, f] : catalog) {
    const auto r = probe_function(f);
    ok = ok && r.off > 0 && r.off_ok == r.off && r.on_rejected == r.on;
    detail += fmt("%s[%s] off-range %zu/%zu inverted (worst residual %.1e), on-range %zu/%zu rejected",
                  detail.empty() ? "" : "; ", name.c_str(), r.off_ok, r.off, r.worst_residual, r.on_rejected, r.on);
  }

  const auto base = poly(kW1, {{G{0}, 1.0}, {G{1}, 0.25}, {G{-1}, 0.25}});
  const std::vector<std::pair<std::string, FourierPoly>> positive = {
      {"1 + 0.5 cos", base},
      {"(1 + 0.5 cos)^2", multiply(base, base)},
      {"2 + cos + 0.3 sin 2", poly(kW1, {{G{0}, 2.0}, {G{1}, 0.5}, {G{-1}, 0.5}, {G{2}, -0.15 * i}, {G{-2}, 0.15 * i}})},
      {"1 + 0.2 (cos x1 + cos x2)", poly(kW2, {{G{0, 0}, 1.0}, {G{1, 0}, 0.1}, {G{-1, 0}, 0.1}, {G{0, 1}, 0.1}, {G{0, -1}, 0.1}})},
      {"3 + cos + 0.5 cos 3", poly(kW1, {{G{0}, 3.0}, {G{1}, 0.5}, {G{-1}, 0.5}, {G{3}, 0.25}, {G{-3}, 0.25}})},
  };
  for (const auto& [name, f] : positive) {
    double residual = std::numeric_limits<double>::infinity();
    double gmin = 0.0;
    std::int64_t used = 0;
    for (std::int64_t B : {16, 32, 64}) {
      const auto r = sqrt_positive(f, B, 1e-8);
      residual = r.residual;
      gmin = grid_min_real(r.value, check_grid_size(r.value, B));
      used = B;
      if (residual <= 1e-8) break;
    }
    ok = ok && residual <= 1e-8 && gmin > 0.0;
    detail += fmt("; sqrt[%s] B = %lld residual %.1e grid min %.4g", name.c_str(), static_cast<long long>(used), residual,
                  gmin);
  }
  return {ok, detail};
}

Outcome criterion_7() {
  const std::vector<double> taus = {0.25, 0.5, 1.0, 2.0, 4.0};
  double mass = 0.0;
  double semigroup = 0.0;
  for (const auto& [fam, R] : {std::pair{MarkovFamily::catalog(1, 1.0), std::int64_t{64}},
                               std::pair{MarkovFamily::catalog(1, 0.5), std::int64_t{64}},
                               std::pair{MarkovFamily::catalog(2, 0.5), std::int64_t{12}}}) {
    for (double tau : taus) {
      const auto rep = markov_checks(fam, tau, 64, R, 0.5);
      mass = std::max(mass, rep.mass_defect);
      semigroup = std::max(semigroup, rep.semigroup_defect);
    }
  }
  std::size_t poisson_bad = 0;
  double poisson_worst = 0.0;
  for (double tau : {0.5, 1.0, 2.0}) {
    const auto w = MarkovFamily::catalog(1, 1.0).weight_at(tau);
    for (int j = 0; j < 20; ++j) {
      const double x = (j + 0.37) / 20.0;
      const auto s = shape_function(w, TorusPoint{x}, 32);
      const double gap = std::abs(s.value - oracle::poisson(tau, x));
      poisson_worst = std::max(poisson_worst, gap / s.error);
      if (gap > s.error) ++poisson_bad;
    }
  }
  const auto sweep = markov_subconvolutivity_sweep(MarkovFamily::catalog(1, 0.5), {0.5, 1.0, 2.0}, 16);
  std::string constants;
  for (const auto& r : sweep.reports) constants += fmt("%s%.4g", constants.empty() ? "" : ", ", r.constant);
  const bool ok = mass == 0.0 && semigroup < 1e-13 && poisson_bad == 0 && sweep.verdict == Verdict::certified_bounded;
  return {ok, fmt("mass defect %.1e, semigroup defect %.1e; Poisson closed form: %zu/60 outside the certified error "
                  "(max gap/error %.2g); sweep tau = 0.5, 1, 2 %s with C = %s",
                  mass, semigroup, poisson_bad, poisson_worst, to_string(sweep.verdict), constants.c_str())};
}

AtomicMeasure random_measure(std::size_t dim, std::size_t atoms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<AtomicMeasure::Atom> a;
  double total = 0.0;
  for (std::size_t k = 0; k < atoms; ++k) {
    a.emplace_back(oracle::random_point(dim, rng), u(rng));
    total += a.back().second;
  }
  for (auto& [x, m] : a) m /= total;
  return AtomicMeasure(std::move(a));
}

Outcome criterion_8() {
  std::mt19937_64 rng(8008);
  double expectation = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto& w = t % 2 ? kW2 : kW1;
    const auto nu = random_measure(w.dim(), 1 + t % 5, rng);
    const auto f = oracle::random_poly(w, w.dim() == 1 ? 8 : 4, rng);
    const auto e = expect(nu, f, 8);
    expectation = std::max(expectation, std::abs(e.direct - e.embedded));
  }

  const std::int64_t R = 32;
  const TorusPoint x{0.3};
  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 30; ++n) {
    const double m = mmd(AtomicMeasure::dirac(x), AtomicMeasure::dirac(x + TorusPoint{std::ldexp(1.0, -n)}), kW1, R);
    decreasing = decreasing && m < prev;
    prev = m;
  }

  double closed = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto& w = t % 2 ? kW2 : kW1;
    const std::int64_t r = w.dim() == 1 ? R : 8;
    const auto a = oracle::random_point(w.dim(), rng);
    const auto b = oracle::random_point(w.dim(), rng);
    const double m = mmd(AtomicMeasure::dirac(a), AtomicMeasure::dirac(b), w, r);
    const double l0 = shape_function(w, TorusPoint::identity(w.dim()), r).value;
    closed = std::max(closed, std::abs(m * m - 2.0 * (l0 - shape_function(w, a - b, r).value)));
  }

  std::size_t state_bad = 0;
  double state_worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::int64_t r = 4 << (t % 3);
    const auto f = oracle::random_poly(kW1, r / 2, rng);
    const auto y = oracle::random_point(1, rng);
    const auto s = state_rho(y, f, r);
    const double gap = std::abs(s.trace - s.exact);
    state_worst = std::max(state_worst, gap / s.bound);
    if (gap > s.bound || std::abs(s.exact - oracle::evaluate(f, y)) > 1e-11) ++state_bad;
  }

  const bool ok = expectation <= 1e-11 && decreasing && prev < 1e-6 && closed <= 1e-10 && state_bad == 0;
  return {ok, fmt("expectation two-path gap %.2e; Dirac mmd decreasing %s, final %.2e; mmd^2 closed-form gap %.2e; "
                  "state trace path %zu/200 outside bound (max gap/bound %.2g)",
                  expectation, decreasing ? "yes" : "no", prev, closed, state_bad, state_worst)};
}

Outcome criterion_9() {
  const auto sq = square_preserves_subconvolutivity(kW1, 16);
  const double c = sq.xi.constant;
  const double c2 = sq.lambda.constant;
  const bool ok = sq.verdict == Verdict::certified_bounded && sq.holds && c2 <= c * c * (1.0 + 1e-6);
  return {ok, fmt("window 16: C(xi^2) = %.10g <= C(xi)^2 = %.10g (C(xi) = %.10g), verdict %s", c2, c * c, c,
                  to_string(sq.verdict))};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"1a", criterion_1a}, {"1b", criterion_1b}, {"2", criterion_2}, {"3", criterion_3}, {"4", criterion_4},
    {"5", criterion_5},   {"6", criterion_6},   {"7", criterion_7}, {"8", criterion_8}, {"9", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
    wanted.clear();
    for (const auto& [id, fn] : kCriteria) wanted.push_back(id);
  }
  int failures = 0;
  for (const auto& id : wanted) {
    const auto it = std::find_if(kCriteria.begin(), kCriteria.end(), [&](const auto& c) { return c.first == id; });
    if (it == kCriteria.end()) {
      std::fprintf(stderr, "unknown criterion %s\n", id.c_str());
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = it->second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", id.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
