#pragma once

// One-parameter Markov families lambda_tau = exp(-tau eta) generated by a
// symbol eta with eta(0) = 0 and eta > 0 elsewhere. The kernels k_tau are
// transition densities of the semigroup exp(-tau D), D g = eta(g) g.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rkha/algebra.hpp"
#include "rkha/weight_analysis.hpp"
#include "rkha/weights.hpp"

namespace rkha {

class MarkovFamily {
 public:
  /// eta(g) = |g|^p, p in (0, 1]; weight_at(tau) is Subexponential(tau, p).
  static MarkovFamily catalog(std::size_t dim, double p, LatticeNorm norm = LatticeNorm::l2);
  /// eta tabulated on the box |g|_inf <= radius; `tail(tau)` must bound the
  /// mass of exp(-tau eta) outside the box.
  static MarkovFamily custom(std::size_t dim, std::int64_t radius, std::vector<double> eta,
                             std::function<double(double)> tail);

  std::size_t dim() const { return dim_; }
  bool is_catalog() const { return !table_; }
  double p() const { return p_; }
  LatticeNorm norm() const { return norm_; }

  double eta(const FreqVector& gamma) const;
  Weight weight_at(double tau) const;

 private:
  MarkovFamily() = default;

  std::size_t dim_ = 1;
  double p_ = 1.0;
  LatticeNorm norm_ = LatticeNorm::l2;
  std::int64_t radius_ = 0;
  std::shared_ptr<const std::vector<double>> table_;
  std::function<double(double)> tail_;
};

Weight weight_at(const MarkovFamily& fam, double tau);

enum class Positivity { certified_positive, positive_within_truncation, negative };

const char* to_string(Positivity p);

struct MarkovReport {
  double tau = 0.0;
  double tau_prime = 0.0;
  /// min over grid nodes y of the truncated k_tau(0, y).
  double grid_min = 0.0;
  /// |integral of k_tau(x, .) - 1|, read off the zero coefficient.
  double mass_defect = 0.0;
  /// max over the box of |lambda_tau lambda_tau' - lambda_{tau + tau'}|.
  double semigroup_defect = 0.0;
  double tail = 0.0;
  Positivity positivity = Positivity::negative;
};

MarkovReport markov_checks(const MarkovFamily& fam, double tau, std::size_t grid,
                           std::int64_t radius, double tau_prime);

struct MarkovSweep {
  std::vector<double> taus;
  std::vector<ConvolutionReport> reports;
  /// max over taus and the window of |xi_tau - lambda_{tau/2}|.
  double xi_identity_error = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

MarkovSweep markov_subconvolutivity_sweep(const MarkovFamily& fam, const std::vector<double>& taus,
                                          std::int64_t window, const ReportOptions& options = {});

struct GeneratorSpectrum {
  std::vector<std::pair<FreqVector, double>> eigs;
  /// max |(-1/tau log lambda_tau) - eta| over tau in {1, 2}.
  double tau_dependence = 0.0;
  /// eta vanishes only at the origin within the box.
  bool simple_zero = false;
};

GeneratorSpectrum generator_eigs(const MarkovFamily& fam, std::int64_t radius);

}  // namespace rkha
