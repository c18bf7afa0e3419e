#include "rkha/grid_transform.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>

#include "rkha/errors.hpp"

namespace rkha {

namespace {

// FFTW planning is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

void transform_in_place(std::vector<std::complex<double>>& data, std::size_t n,
                        std::size_t dim, int sign) {
  std::vector<int> dims(dim, static_cast<int>(n));
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft(static_cast<int>(dim), dims.data(), buf, buf, sign,
                             FFTW_ESTIMATE));
  }
  if (!plan) throw Error("grid_transform: FFTW planning failed");
  fftw_execute(plan.get());
}

}  // namespace

GridSpectrum::GridSpectrum(std::size_t n, std::size_t dim, std::size_t cap)
    : grid_(n, dim, cap), bins_(grid_.size()) {}

std::size_t GridSpectrum::index_of(const FreqVector& gamma) const {
  if (gamma.dim() != dim()) throw DimensionMismatch("grid_transform: dimension mismatch");
  const auto n = static_cast<std::int64_t>(per_dim());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    std::int64_t k = gamma[i] % n;
    if (k < 0) k += n;
    idx = idx * per_dim() + static_cast<std::size_t>(k);
  }
  return idx;
}

void GridSpectrum::accumulate(const FreqVector& gamma, std::complex<double> value) {
  bins_[index_of(gamma)] += value;
}

std::complex<double> GridSpectrum::bin(const FreqVector& gamma) const {
  return bins_[index_of(gamma)];
}

std::vector<std::complex<double>> GridSpectrum::synthesize() const {
  std::vector<std::complex<double>> out = bins_;
  transform_in_place(out, per_dim(), dim(), FFTW_BACKWARD);
  return out;
}

GridSpectrum GridSpectrum::analyze(const std::vector<std::complex<double>>& samples,
                                   std::size_t n, std::size_t dim) {
  GridSpectrum spec(n, dim);
  if (samples.size() != spec.grid_.size()) {
    throw InvalidArgument("grid_transform: sample count does not match grid");
  }
  spec.bins_ = samples;
  transform_in_place(spec.bins_, n, dim, FFTW_FORWARD);
  const double scale = spec.grid_.weight();
  for (auto& b : spec.bins_) b *= scale;
  return spec;
}

std::size_t next_pow2(std::size_t value) {
  std::size_t p = 1;
  while (p < value) p <<= 1;
  return p;
}

}  // namespace rkha
