#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rkha/algebra.hpp"
#include "rkha/errors.hpp"

using namespace rkha;
using oracle::Complex;

namespace {

const Weight kW = Weight::subexponential(1, 1.0, 0.5);

FourierPoly cos_pair(const Weight& w, double c0, double half_amp, std::int64_t k = 1) {
  FourierPoly f = FourierPoly::unit(w) * c0;
  f.add(FreqVector{k}, half_amp);
  f.add(FreqVector{-k}, half_amp);
  return f;
}

double max_coeff_diff(const FourierPoly& a, const FourierPoly& b) {
  double m = 0.0;
  const FourierPoly diff = a - b;
  for (const auto& [g, c] : diff.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

TEST_CASE("hnorm examples") {
  for (std::int64_t g = -5; g <= 5; ++g) {
    CHECK(hnorm(FourierPoly::basis(kW, FreqVector{g})) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(hnorm(FourierPoly::unit(kW)) == 1.0);
  CHECK(hnorm(FourierPoly(kW)) == 0.0);
}

TEST_CASE("inner product") {
  const auto w = Weight::subexponential(2, 0.8, 0.5);
  for (const auto& a : box(2, 2)) {
    for (const auto& b : box(2, 2)) {
      const Complex ip = inner(FourierPoly::basis(w, a), FourierPoly::basis(w, b));
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-14);
    }
  }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto f = oracle::random_poly(w, 3, rng, 0.7);
    const auto g = oracle::random_poly(w, 3, rng, 0.7);
    CHECK(std::abs(inner(f, FourierPoly::unit(w)) - std::conj(f.coeff(FreqVector{0, 0}))) < 1e-15);
    CHECK(std::abs(inner(f, g) - std::conj(inner(g, f))) < 1e-13);
    CHECK(std::abs(inner(f, f).real() - hnorm(f) * hnorm(f)) < 1e-12 * hnorm(f) * hnorm(f));
    CHECK(std::abs(inner(f, f).imag()) < 1e-14);
    const Complex a(0.3, -1.2);
    CHECK(std::abs(inner(f, g * a) - a * inner(f, g)) < 1e-12 * std::abs(inner(f, g)) + 1e-13);
    CHECK(std::abs(inner(f * a, g) - std::conj(a) * inner(f, g)) < 1e-12 * std::abs(inner(f, g)) + 1e-13);
    // Parseval: u^(g) = f^(g) / xi(g).
    double parseval = 0.0;
    for (const auto& [gamma, c] : f.coeffs()) parseval += std::norm(c / w.xi(gamma));
    CHECK(hnorm(f) * hnorm(f) == doctest::Approx(parseval).epsilon(1e-13));
  }
  CHECK_THROWS_AS(inner(FourierPoly::unit(kW), FourierPoly::unit(Weight::subexponential(1, 2.0, 0.5))),
                  WeightMismatch);
  CHECK_THROWS_AS(inner(FourierPoly::unit(kW), FourierPoly::unit(Weight::subexponential(2, 1.0, 0.5))),
                  DimensionMismatch);
}

TEST_CASE("multiply examples") {
  std::mt19937_64 rng(4);
  const auto f = oracle::random_poly(kW, 4, rng);
  CHECK(max_coeff_diff(multiply(f, FourierPoly::unit(kW)), f) == 0.0);
  const auto prod = multiply(FourierPoly::character(kW, FreqVector{3}), FourierPoly::character(kW, FreqVector{-5}));
  CHECK(prod.support_size() == 1);
  CHECK(prod.coeff(FreqVector{-2}) == Complex(1.0));

  const auto w2 = Weight::subexponential(2, 1.0, 0.5);
  for (int t = 0; t < 5; ++t) {
    const auto a = oracle::random_poly(w2, 4, rng, 0.6);
    const auto b = oracle::random_poly(w2, 4, rng, 0.6);
    const auto ab = multiply(a, b);
    CHECK(ab.bandwidth() <= a.bandwidth() + b.bandwidth());
    const auto pts = grid_points(10, 2);
    double err = 0.0;
    for (const auto& x : pts) {
      err = std::max(err, std::abs(oracle::evaluate(ab, x) - oracle::evaluate(a, x) * oracle::evaluate(b, x)));
    }
    CHECK(err < 1e-10);
  }
  CHECK_THROWS_AS(multiply(oracle::random_poly(w2, 30, rng), oracle::random_poly(w2, 30, rng), 100), ResourceError);
}

TEST_CASE("ring laws") {
  std::mt19937_64 rng(5);
  const auto w = Weight::subexponential(2, 1.0, 0.5);
  for (int t = 0; t < 10; ++t) {
    const auto f = oracle::random_poly(w, 3, rng, 0.5);
    const auto g = oracle::random_poly(w, 3, rng, 0.5);
    const auto h = oracle::random_poly(w, 3, rng, 0.5);
    CHECK(max_coeff_diff(multiply(f, g), multiply(g, f)) < 1e-12);
    CHECK(max_coeff_diff(multiply(multiply(f, g), h), multiply(f, multiply(g, h))) < 1e-12);
    CHECK(max_coeff_diff(multiply(f, g + h), multiply(f, g) + multiply(f, h)) < 1e-12);
  }
}

TEST_CASE("involution") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto f = oracle::random_poly(kW, 6, rng);
    const auto g = oracle::random_poly(kW, 6, rng);
    CHECK(max_coeff_diff(involution(involution(f)), f) == 0.0);
    CHECK(std::abs(hnorm(involution(f)) - hnorm(f)) <= 1e-14 * hnorm(f));
    CHECK(max_coeff_diff(involution(multiply(f, g)), multiply(involution(f), involution(g))) < 1e-12);
    const auto x = oracle::random_point(1, rng);
    CHECK(std::abs(evaluate(involution(f), x) - std::conj(evaluate(f, x))) < 1e-12);
  }
  for (std::int64_t g = -4; g <= 4; ++g) {
    CHECK(max_coeff_diff(involution(FourierPoly::basis(kW, FreqVector{g})), FourierPoly::basis(kW, FreqVector{-g})) == 0.0);
  }
}

TEST_CASE("evaluate") {
  std::mt19937_64 rng(7);
  CHECK(evaluate(FourierPoly::unit(kW), TorusPoint{0.3}) == Complex(1.0));
  CHECK(std::abs(evaluate(FourierPoly::character(kW, FreqVector{7}), TorusPoint{0.0}) - 1.0) < 1e-15);
  const auto f = oracle::random_poly(kW, 10, rng);
  for (int t = 0; t < 50; ++t) {
    const auto x = oracle::random_point(1, rng);
    CHECK(std::abs(evaluate(f, x) - oracle::evaluate(f, x)) < 1e-12);
  }
  CHECK_THROWS_AS(evaluate(f, TorusPoint{0.1, 0.2}), DimensionMismatch);
}

TEST_CASE("grid samples round trip") {
  std::mt19937_64 rng(8);
  const auto w = Weight::subexponential(2, 1.0, 0.5);
  const auto f = oracle::random_poly(w, 3, rng);
  const auto samples = sample_on_grid(f, 8);
  const auto pts = grid_points(8, 2);
  for (std::size_t i = 0; i < pts.size(); i += 7) CHECK(std::abs(samples[i] - oracle::evaluate(f, pts[i])) < 1e-12);
  CHECK(max_coeff_diff(from_grid_samples(w, samples, 8, 3), f) < 1e-13);
  CHECK_THROWS_AS(from_grid_samples(w, samples, 8, 4), InvalidArgument);
}

TEST_CASE("real functions") {
  const auto f = cos_pair(kW, 1.0, 0.25);
  CHECK(f.is_real());
  const auto g = f + FourierPoly::character(kW, FreqVector{2}, Complex(0, 1));
  CHECK_FALSE(g.is_real());
  CHECK(g.real_part().is_real());
}

TEST_CASE("banach constant") {
  const auto rep = subconvolutivity_report(kW, 16);
  const double c = banach_constant(kW, rep);
  CHECK(c == doctest::Approx(std::sqrt(rep.constant)));
  const auto one = FourierPoly::unit(kW);
  CHECK(hnorm(multiply(one, one)) <= c);

  // Characters: ||g|| = lambda(g)^(-1/2), so
  // ||g g'|| / (||g|| ||g'||) = sqrt(lambda(g) lambda(g') / lambda(g + g')).
  for (std::int64_t a = -8; a <= 8; ++a) {
    for (std::int64_t b = -8; b <= 8; ++b) {
      const auto fa = FourierPoly::character(kW, FreqVector{a});
      const auto fb = FourierPoly::character(kW, FreqVector{b});
      const double ratio = hnorm(multiply(fa, fb)) / (hnorm(fa) * hnorm(fb));
      const double closed = std::sqrt(kW(FreqVector{a}) * kW(FreqVector{b}) / kW(FreqVector{a + b}));
      CHECK(ratio == doctest::Approx(closed).epsilon(1e-13));
      CHECK(ratio <= c);
    }
  }

  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const auto f = oracle::random_poly(kW, 8, rng);
    const auto g = oracle::random_poly(kW, 8, rng);
    CHECK(hnorm(multiply(f, g)) <= c * hnorm(f) * hnorm(g));
  }

  ConvolutionReport bad = rep;
  bad.verdict = Verdict::inconclusive;
  CHECK_THROWS_AS(banach_constant(kW, bad), Inconclusive);
}

TEST_CASE("invert examples") {
  SUBCASE("constant") {
    const auto r = invert(FourierPoly::unit(kW) * 4.0, 8, 1e-12);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-14);
    CHECK(std::abs(r.value.coeff(FreqVector{0}) - 0.25) < 1e-15);
    CHECK(r.value.support_size() == 1);
  }
  SUBCASE("character") {
    const auto r = invert(FourierPoly::character(kW, FreqVector{3}), 8, 1e-12);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-14);
    CHECK(std::abs(r.value.coeff(FreqVector{-3}) - 1.0) < 1e-14);
  }
  SUBCASE("1 + 0.5 cos") {
    const auto f = cos_pair(kW, 1.0, 0.25);
    const auto r = invert(f, 32, 1e-8);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-8);
    CHECK(hnorm(FourierPoly::unit(kW) - multiply(f, r.value)) == doctest::Approx(r.residual).epsilon(1e-12));
    std::mt19937_64 rng(10);
    for (int t = 0; t < 100; ++t) {
      const auto x = oracle::random_point(1, rng);
      CHECK(std::abs(oracle::evaluate(r.value, x) - 1.0 / oracle::evaluate(f, x)) < 1e-9);
    }
  }
  SUBCASE("two dimensions") {
    const auto w = Weight::subexponential(2, 1.0, 0.5);
    FourierPoly f = FourierPoly::unit(w) * 2.0;
    f.add(FreqVector{1, 0}, 0.25);
    f.add(FreqVector{-1, 0}, 0.25);
    f.add(FreqVector{0, 1}, Complex(0, 0.3));
    const auto r = invert(f, 16, 1e-8);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-8);
  }
  SUBCASE("vanishing") {
    CHECK_THROWS_AS(invert(cos_pair(kW, 0.0, 0.5), 16, 1e-8), NotInvertible);
    CHECK_THROWS_AS(invert(cos_pair(kW, 1.0, 0.5), 16, 1e-8), NotInvertible);
  }
  SUBCASE("tolerance out of reach at a small bandwidth") {
    const auto r = invert(cos_pair(kW, 1.0, 0.45), 2, 1e-12);
    CHECK_FALSE(r.converged);
    CHECK(std::isfinite(r.residual));
    CHECK(r.value.bandwidth() <= 2);
    CHECK(hnorm(FourierPoly::unit(kW) - multiply(cos_pair(kW, 1.0, 0.45), r.value)) ==
          doctest::Approx(r.residual).epsilon(1e-12));
  }
}

TEST_CASE("sqrt_positive examples") {
  SUBCASE("constant") {
    const auto r = sqrt_positive(FourierPoly::unit(kW) * 4.0, 8, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value.coeff(FreqVector{0}) - 2.0) < 1e-14);
    CHECK(r.residual <= 1e-14);
  }
  SUBCASE("known root") {
    const auto root = cos_pair(kW, 1.0, 0.25);
    const auto f = multiply(root, root);
    const auto r = sqrt_positive(f, 16, 1e-9);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-9);
    CHECK(max_coeff_diff(r.value, root) < 1e-9);
    CHECK(grid_min_real(r.value, 64) > 0.0);
    CHECK(hnorm(f - multiply(r.value, r.value)) == doctest::Approx(r.residual).epsilon(1e-9));
  }
  SUBCASE("non-polynomial root") {
    const auto f = cos_pair(kW, 2.0, 0.5) + FourierPoly::character(kW, FreqVector{2}, Complex(0, -0.15)) +
                   FourierPoly::character(kW, FreqVector{-2}, Complex(0, 0.15));
    const auto r = sqrt_positive(f, 48, 1e-8);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-8);
    CHECK(r.value.is_real());
    CHECK(grid_min_real(r.value, check_grid_size(f, 48)) > 0.0);
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(sqrt_positive(cos_pair(kW, 0.2, 0.5), 16, 1e-8), DomainError);
    CHECK_THROWS_AS(sqrt_positive(FourierPoly::character(kW, FreqVector{1}), 16, 1e-8), DomainError);
  }
}

TEST_CASE("spectrum probes") {
  const auto chi = FourierPoly::character(kW, FreqVector{1});
  auto p = spectrum_probe(chi, 0.0, 8, 1e-10);
  CHECK(p.invertible);
  CHECK(p.reason == "inverted");
  p = spectrum_probe(chi, 1.0, 8, 1e-10);
  CHECK_FALSE(p.invertible);
  CHECK(p.reason == "on-sampled-range");
  CHECK(std::isinf(p.residual));

  // Real f with range [a, b]: 20 probes on the circle of radius b - a about
  // the midpoint invert; real points of the range do not.
  const auto f = cos_pair(kW, 1.0, 0.125);
  const double a = 0.75;
  const double b = 1.25;
  for (int k = 0; k < 20; ++k) {
    const Complex z = (a + b) / 2 + (b - a) * std::polar(1.0, 2 * std::numbers::pi * k / 20);
    const auto q = spectrum_probe(f, z, 32, 1e-8);
    CHECK(q.invertible);
    CHECK(q.residual <= 1e-8);
  }
  const std::size_t n = check_grid_size(f, 32);
  const auto values = sample_on_grid(f, n);
  for (std::size_t i = 0; i < values.size(); i += n / 16) {
    CHECK_FALSE(spectrum_probe(f, values[i], 32, 1e-8).invertible);
  }
  // Between grid nodes the threshold does not fire; the inverse solver reports failure.
  CHECK_FALSE(spectrum_probe(f, 1.0 + 0.125 * std::cos(2 * std::numbers::pi * 0.3), 32, 1e-8).invertible);
}
