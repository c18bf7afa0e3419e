#include "rkha/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rkha/errors.hpp"

namespace rkha {

namespace {

using GammaPolicy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>>;

// Outward rounding applied to every certified tail.
constexpr double kTailSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const Weight& w, const FreqVector& gamma) {
  if (gamma.dim() != w.dim()) throw DimensionMismatch("weight: dimension mismatch");
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Volume of the unit ball of the given norm in R^k.
double unit_ball_volume(std::size_t k, LatticeNorm norm) {
  const double kd = static_cast<double>(k);
  switch (norm) {
    case LatticeNorm::l2:
      return std::pow(std::numbers::pi, kd / 2.0) / std::tgamma(kd / 2.0 + 1.0);
    case LatticeNorm::l1:
      return std::pow(2.0, kd) / std::tgamma(kd + 1.0);
    case LatticeNorm::linf:
      return std::pow(2.0, kd);
  }
  return 0.0;
}

// Norm of the all-ones vector of R^k.
double ones_norm(std::size_t k, LatticeNorm norm) {
  const double kd = static_cast<double>(k);
  switch (norm) {
    case LatticeNorm::l2:
      return std::sqrt(kd);
    case LatticeNorm::l1:
      return kd;
    case LatticeNorm::linf:
      return 1.0;
  }
  return kd;
}

std::size_t table_index(const CustomTable& t, const FreqVector& gamma) {
  const auto side = static_cast<std::size_t>(2 * t.radius + 1);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < gamma.dim(); ++i) {
    idx = idx * side + static_cast<std::size_t>(gamma[i] + t.radius);
  }
  return idx;
}

}  // namespace

double lattice_norm(const FreqVector& gamma, LatticeNorm norm) {
  double acc = 0.0;
  for (auto c : gamma.components()) {
    const double a = std::abs(static_cast<double>(c));
    switch (norm) {
      case LatticeNorm::l1:
        acc += a;
        break;
      case LatticeNorm::l2:
        acc += a * a;
        break;
      case LatticeNorm::linf:
        acc = std::max(acc, a);
        break;
    }
  }
  return norm == LatticeNorm::l2 ? std::sqrt(acc) : acc;
}

std::string to_string(LatticeNorm norm) {
  switch (norm) {
    case LatticeNorm::l1:
      return "l1";
    case LatticeNorm::l2:
      return "l2";
    case LatticeNorm::linf:
      return "linf";
  }
  return "l2";
}

LatticeNorm lattice_norm_from_string(const std::string& name) {
  if (name == "l1") return LatticeNorm::l1;
  if (name == "l2") return LatticeNorm::l2;
  if (name == "linf") return LatticeNorm::linf;
  throw InvalidArgument("weight: unknown lattice norm '" + name + "'");
}

Weight Weight::subexponential(std::size_t dim, double tau, double p, LatticeNorm norm) {
  if (dim == 0) throw InvalidArgument("weight: dimension must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("weight: tau must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("weight: p must lie in (0, 1]");
  return Weight(dim, Subexponential{tau, p, norm});
}

Weight Weight::polynomial(std::size_t dim, double s, LatticeNorm norm) {
  if (dim == 0) throw InvalidArgument("weight: dimension must be positive");
  if (!(s > static_cast<double>(dim)) || !std::isfinite(s)) {
    throw InvalidArgument("weight: polynomial decay needs s > d");
  }
  return Weight(dim, PolynomialDecay{s, norm});
}

Weight Weight::custom(std::size_t dim, std::int64_t radius, std::vector<double> values,
                      std::optional<double> declared_tail) {
  if (dim == 0) throw InvalidArgument("weight: dimension must be positive");
  if (radius < 0) throw InvalidArgument("weight: table radius must be nonnegative");
  if (values.size() != box_size(dim, radius)) {
    throw InvalidArgument("weight: table size does not match its box");
  }
  if (declared_tail && (!(*declared_tail >= 0.0) || !std::isfinite(*declared_tail))) {
    throw InvalidArgument("weight: declared tail must be finite and nonnegative");
  }
  CustomTable table{radius, std::move(values), declared_tail};
  for (double v : table.values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("weight: table must be strictly positive");
  }
  for_each_in_box(dim, radius, [&](const FreqVector& g) {
    const double a = table.values[table_index(table, g)];
    const double b = table.values[table_index(table, -g)];
    if (std::abs(a - b) > 1e-12 * std::max(a, b)) {
      throw InvalidArgument("weight: table is not symmetric under g -> -g");
    }
  });
  return Weight(dim, std::move(table));
}

LatticeNorm Weight::norm() const {
  return std::visit(Overloaded{[](const Subexponential& f) { return f.norm; },
                               [](const PolynomialDecay& f) { return f.norm; },
                               [](const CustomTable&) { return LatticeNorm::linf; }},
                    family_);
}

bool Weight::has_value(const FreqVector& gamma) const {
  require_dim(*this, gamma);
  if (const auto* t = std::get_if<CustomTable>(&family_)) return gamma.norm_inf() <= t->radius;
  return true;
}

double Weight::operator()(const FreqVector& gamma) const {
  require_dim(*this, gamma);
  if (const auto* t = std::get_if<CustomTable>(&family_)) {
    if (gamma.norm_inf() > t->radius) {
      throw Unsupported("weight: custom table queried outside its box");
    }
    return t->values[table_index(*t, gamma)];
  }
  return profile(lattice_norm(gamma, norm()));
}

double Weight::xi(const FreqVector& gamma) const { return std::sqrt((*this)(gamma)); }

double Weight::log_value(const FreqVector& gamma) const {
  if (const auto* f = std::get_if<Subexponential>(&family_)) {
    require_dim(*this, gamma);
    return -f->tau * std::pow(lattice_norm(gamma, f->norm), f->p);
  }
  if (const auto* f = std::get_if<PolynomialDecay>(&family_)) {
    require_dim(*this, gamma);
    return -f->s * std::log1p(lattice_norm(gamma, f->norm));
  }
  return std::log((*this)(gamma));
}

double Weight::profile(double r) const {
  return std::visit(
      Overloaded{[r](const Subexponential& f) { return std::exp(-f.tau * std::pow(r, f.p)); },
                 [r](const PolynomialDecay& f) { return std::pow(1.0 + r, -f.s); },
                 [](const CustomTable&) -> double {
                   throw Unsupported("weight: custom weights have no radial profile");
                 }},
      family_);
}

double Weight::sup_beyond(double r) const {
  if (const auto* t = std::get_if<CustomTable>(&family_)) {
    if (!t->declared_tail) throw Unsupported("weight: custom weight without a declared tail");
    double m = *t->declared_tail;
    for_each_in_box(dim_, t->radius, [&](const FreqVector& g) {
      if (static_cast<double>(g.norm_inf()) > r) m = std::max(m, t->values[table_index(*t, g)]);
    });
    return m;
  }
  // |g|_norm >= |g|_inf >= floor(r) + 1 and the profile is nonincreasing.
  if (r < 0.0) return profile(0.0);
  return profile(std::floor(r) + 1.0);
}

double Weight::sup() const {
  if (const auto* t = std::get_if<CustomTable>(&family_)) {
    double m = t->declared_tail.value_or(0.0);
    for (double v : t->values) m = std::max(m, v);
    return m;
  }
  return profile(0.0);
}

// Orthant decomposition: lattice points with exactly k nonzero coordinates
// contribute C(d,k) 2^k copies of a sum over m in N_{>=1}^k. Each m owns the
// cube m - [0,1]^k, on which |y| <= |m|, so phi(|m|) is dominated by the
// integral of phi(|y|) over the cube. The cubes tile a region inside
// {y >= 0, |y| > a_k}, giving sum <= (k V_k / 2^k) int_{a_k}^inf phi(r) r^{k-1} dr.
double Weight::catalog_tail(double radius) const {
  const LatticeNorm nrm = norm();
  double total = 0.0;
  for (std::size_t k = 1; k <= dim_; ++k) {
    const double kd = static_cast<double>(k);
    double a = k == 1 ? radius : std::max(0.0, radius - ones_norm(k, nrm));
    double radial = std::visit(
        Overloaded{[&](const Subexponential& f) {
                     const double shape = kd / f.p;
                     const double x = f.tau * std::pow(a, f.p);
                     const double g = boost::math::tgamma(shape, x, GammaPolicy());
                     return g * std::pow(f.tau, -shape) / f.p;
                   },
                   [&](const PolynomialDecay& f) {
                     // r^{k-1} <= (1+r)^{k-1}
                     return std::pow(1.0 + a, kd - f.s) / (f.s - kd);
                   },
                   [](const CustomTable&) -> double { return 0.0; }},
        family_);
    total += binomial(dim_, k) * kd * unit_ball_volume(k, nrm) * radial;
  }
  return total * (1.0 + kTailSlack);
}

TailBound Weight::tail_mass(std::int64_t radius) const {
  if (radius < 0) throw InvalidArgument("weight: tail radius must be nonnegative");
  if (const auto* t = std::get_if<CustomTable>(&family_)) {
    if (!t->declared_tail) throw Unsupported("weight: custom weight without a declared tail");
    double mass = *t->declared_tail;
    if (radius < t->radius) {
      for_each_in_box(dim_, t->radius, [&](const FreqVector& g) {
        if (g.norm_inf() > radius) mass += t->values[table_index(*t, g)];
      });
    }
    return {radius, mass * (1.0 + kTailSlack)};
  }
  return {radius, catalog_tail(static_cast<double>(radius))};
}

std::int64_t Weight::truncation_radius(double eps, std::int64_t cap) const {
  if (!(eps > 0.0)) throw InvalidArgument("weight: truncation tolerance must be positive");
  if (tail_mass(0).bound <= eps) return 0;
  std::int64_t hi = 1;
  while (tail_mass(hi).bound > eps) {
    if (hi >= cap) throw ResourceError("weight: truncation radius exceeds the cap");
    hi = std::min(cap, hi * 2);
  }
  std::int64_t lo = hi / 2;  // tail(lo) > eps
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (tail_mass(mid).bound <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double Weight::total_mass_bound() const {
  return (*this)(FreqVector::zero(dim_)) + tail_mass(0).bound;
}

Weight Weight::squared() const {
  return std::visit(
      Overloaded{[&](const Subexponential& f) { return Weight(dim_, Subexponential{2.0 * f.tau, f.p, f.norm}); },
                 [&](const PolynomialDecay& f) { return Weight(dim_, PolynomialDecay{2.0 * f.s, f.norm}); },
                 [&](const CustomTable& t) {
                   CustomTable sq = t;
                   for (double& v : sq.values) v *= v;
                   // sum a_i^2 <= (sum a_i)^2
                   if (sq.declared_tail) *sq.declared_tail = (*sq.declared_tail) * (*sq.declared_tail);
                   return Weight(dim_, std::move(sq));
                 }},
      family_);
}

bool Weight::operator==(const Weight& other) const {
  return dim_ == other.dim_ && family_ == other.family_;
}

double weight_eval(const Weight& w, const FreqVector& gamma) { return w(gamma); }
double xi_eval(const Weight& w, const FreqVector& gamma) { return w.xi(gamma); }
TailBound tail_mass(const Weight& w, std::int64_t radius) { return w.tail_mass(radius); }
std::int64_t truncation_radius(const Weight& w, double eps, std::int64_t cap) {
  return w.truncation_radius(eps, cap);
}

}  // namespace rkha
