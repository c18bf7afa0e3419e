#pragma once

// Window checkers for the weight conditions:
//   subconvolutivity   (lambda * lambda)(g) <= C lambda(g)
//   subadditivity      lambda^-1(g + h) <= C (lambda^-1(g) + lambda^-1(h))
//   submultiplicativity lambda^-1(g + h) <= C lambda^-1(g) lambda^-1(h)
//
// Windows are l-inf boxes |g|_inf <= rho. A finite computation cannot settle
// a statement about all of Z^d; the convolution report therefore carries
// certified convolution values on the window plus a stabilization verdict,
// and the two additive/multiplicative constants are window maxima, i.e.
// lower bounds on the true constants.

#include <cstdint>
#include <vector>

#include "rkha/torus.hpp"
#include "rkha/weights.hpp"

namespace rkha {

struct Interval {
  double lo;
  double hi;
};

/// Certified bracket of (lambda * lambda)(gamma) from the partial sum over
/// the box |beta|_inf <= radius plus a rigorous remainder.
Interval convolve_at(const Weight& w, const FreqVector& gamma, std::int64_t radius);

enum class Verdict { certified_bounded, inconclusive };

const char* to_string(Verdict v);

struct Offender {
  FreqVector gamma;
  double ratio;
};

struct ConvolutionReport {
  std::int64_t window = 0;
  /// Truncation radius of the last pass.
  std::int64_t radius = 0;
  /// max over the window of hi(g) / lambda(g).
  double constant = 0.0;
  /// max over the window of hi(g) - lo(g) at the last pass.
  double tail_correction = 0.0;
  Verdict verdict = Verdict::inconclusive;
  /// Top five ratios of the last pass, largest first.
  std::vector<Offender> worst;
  /// (radius, constant) for every pass.
  std::vector<std::pair<std::int64_t, double>> history;
};

struct ReportOptions {
  /// Relative change under radius doubling counted as stable.
  double tol = 1e-6;
  /// Consecutive stable doublings required.
  int stable_passes = 2;
  /// First truncation radius; 0 picks max(window, 8).
  std::int64_t initial_radius = 0;
  std::int64_t max_radius = std::int64_t{1} << 16;
  /// Cap on the dense table of weight values per pass.
  std::size_t max_table = std::size_t{1} << 24;
  /// Cap on multiply-adds per pass.
  double max_work = 2e9;
};

ConvolutionReport subconvolutivity_report(const Weight& w, std::int64_t window,
                                          const ReportOptions& options = {});

struct WindowConstant {
  std::int64_t window = 0;
  double constant = 0.0;
  FreqVector arg_a;
  FreqVector arg_b;
};

WindowConstant subadditivity_report(const Weight& w, std::int64_t window);
WindowConstant submultiplicativity_report(const Weight& w, std::int64_t window);

struct SquareReport {
  ConvolutionReport xi;
  ConvolutionReport lambda;
  /// C(xi^2) <= C(xi)^2 (1 + tol).
  bool holds = false;
  Verdict verdict = Verdict::inconclusive;
};

/// Runs the convolution report on xi and on xi^2 and compares constants.
SquareReport square_preserves_subconvolutivity(const Weight& xi, std::int64_t window,
                                               const ReportOptions& options = {});

}  // namespace rkha
