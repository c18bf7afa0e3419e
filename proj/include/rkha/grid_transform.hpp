#pragma once

// Dense spectra on the n-per-dimension grid, backed by FFTW.
//
// Bin k holds the sum of all coefficients whose frequency is congruent to k
// mod n. Synthesis is therefore exact at grid nodes for any finite support,
// aliased or not.

#include <complex>
#include <cstddef>
#include <vector>

#include "rkha/torus.hpp"

namespace rkha {

class GridSpectrum {
 public:
  GridSpectrum(std::size_t n, std::size_t dim, std::size_t cap = kDefaultGridCap);

  std::size_t per_dim() const { return grid_.per_dim(); }
  std::size_t dim() const { return grid_.dim(); }
  const Grid& grid() const { return grid_; }

  void accumulate(const FreqVector& gamma, std::complex<double> value);
  std::complex<double> bin(const FreqVector& gamma) const;

  /// Values sum_k bin(k) exp(2 pi i k.x_j) at every node x_j, in Grid order.
  std::vector<std::complex<double>> synthesize() const;

  /// Inverse of synthesize(): bins (1/N) sum_j v_j exp(-2 pi i k.x_j).
  static GridSpectrum analyze(const std::vector<std::complex<double>>& samples,
                              std::size_t n, std::size_t dim);

 private:
  std::size_t index_of(const FreqVector& gamma) const;

  Grid grid_;
  std::vector<std::complex<double>> bins_;
};

/// Smallest power of two >= value (and >= 1).
std::size_t next_pow2(std::size_t value);

}  // namespace rkha
