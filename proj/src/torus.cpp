#include "rkha/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rkha/errors.hpp"

namespace rkha {

namespace {

double reduce_unit(double v) {
  double r = v - std::floor(v);
  // floor can round v - floor(v) up to exactly 1 for tiny negative v.
  return r >= 1.0 ? 0.0 : r;
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch("torus: dimension mismatch");
}

}  // namespace

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double& c : coords_) c = reduce_unit(c);
}

TorusPoint::TorusPoint(std::initializer_list<double> coords)
    : TorusPoint(std::vector<double>(coords)) {}

TorusPoint TorusPoint::identity(std::size_t dim) {
  return TorusPoint(std::vector<double>(dim, 0.0));
}

TorusPoint TorusPoint::operator+(const TorusPoint& other) const {
  require_same_dim(dim(), other.dim());
  std::vector<double> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = coords_[i] + other.coords_[i];
  return TorusPoint(std::move(out));
}

TorusPoint TorusPoint::operator-(const TorusPoint& other) const {
  require_same_dim(dim(), other.dim());
  std::vector<double> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = coords_[i] - other.coords_[i];
  return TorusPoint(std::move(out));
}

TorusPoint TorusPoint::operator-() const {
  std::vector<double> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = -coords_[i];
  return TorusPoint(std::move(out));
}

bool TorusPoint::approx_equal(const TorusPoint& other, double tol) const {
  if (dim() != other.dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    double d = std::abs(coords_[i] - other.coords_[i]);
    if (std::min(d, 1.0 - d) > tol) return false;
  }
  return true;
}

bool FreqVector::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
}

std::int64_t FreqVector::norm_inf() const {
  std::int64_t m = 0;
  for (auto v : c_) m = std::max<std::int64_t>(m, v < 0 ? -v : v);
  return m;
}

FreqVector FreqVector::operator+(const FreqVector& other) const {
  require_same_dim(dim(), other.dim());
  std::vector<std::int64_t> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = c_[i] + other.c_[i];
  return FreqVector(std::move(out));
}

FreqVector FreqVector::operator-(const FreqVector& other) const {
  require_same_dim(dim(), other.dim());
  std::vector<std::int64_t> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = c_[i] - other.c_[i];
  return FreqVector(std::move(out));
}

FreqVector FreqVector::operator-() const {
  std::vector<std::int64_t> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = -c_[i];
  return FreqVector(std::move(out));
}

std::complex<double> character_eval(const FreqVector& gamma, const TorusPoint& x) {
  require_same_dim(gamma.dim(), x.dim());
  double phase = 0.0;
  for (std::size_t i = 0; i < gamma.dim(); ++i) {
    if (gamma[i] == 0) continue;
    double t = static_cast<double>(gamma[i]) * x[i];
    phase += t - std::round(t);
  }
  phase -= std::round(phase);
  const double angle = 2.0 * std::numbers::pi * phase;
  return {std::cos(angle), std::sin(angle)};
}

Grid::Grid(std::size_t n, std::size_t dim, std::size_t cap) : n_(n), dim_(dim) {
  if (n == 0) throw InvalidArgument("grid: resolution must be positive");
  if (dim == 0) throw InvalidArgument("grid: dimension must be positive");
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (total > cap / n) throw ResourceError("grid: n^d exceeds the size cap");
    total *= n;
  }
  if (total > cap) throw ResourceError("grid: n^d exceeds the size cap");
  size_ = total;
}

TorusPoint Grid::point(std::size_t index) const {
  std::vector<double> c(dim_);
  for (std::size_t i = dim_; i-- > 0;) {
    c[i] = static_cast<double>(index % n_) / static_cast<double>(n_);
    index /= n_;
  }
  return TorusPoint(std::move(c));
}

std::vector<TorusPoint> grid_points(std::size_t n, std::size_t dim, std::size_t cap) {
  Grid grid(n, dim, cap);
  std::vector<TorusPoint> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(grid.point(i));
  return out;
}

std::size_t box_size(std::size_t dim, std::int64_t radius) {
  if (radius < 0) return 0;
  std::size_t side = static_cast<std::size_t>(2 * radius + 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= side;
  return total;
}

void for_each_in_box(std::size_t dim, std::int64_t radius,
                     const std::function<void(const FreqVector&)>& visit) {
  if (radius < 0) return;
  std::vector<std::int64_t> idx(dim, -radius);
  while (true) {
    visit(FreqVector(idx));
    std::size_t i = dim;
    while (true) {
      if (i == 0) return;
      --i;
      if (idx[i] < radius) {
        ++idx[i];
        break;
      }
      idx[i] = -radius;
    }
  }
}

std::vector<FreqVector> box(std::size_t dim, std::int64_t radius) {
  std::vector<FreqVector> out;
  out.reserve(box_size(dim, radius));
  for_each_in_box(dim, radius, [&](const FreqVector& g) { out.push_back(g); });
  return out;
}

}  // namespace rkha
