#include "rkha/weight_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rkha/errors.hpp"

namespace rkha {

namespace {

constexpr double kRoundingSlack = 1e-13;

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::int64_t custom_radius(const Weight& w) {
  if (const auto* t = std::get_if<CustomTable>(&w.family())) return t->radius;
  return std::numeric_limits<std::int64_t>::max();
}

// Weight values on a dense l-inf box, zero where a custom table is silent.
class DenseTable {
 public:
  DenseTable(const Weight& w, std::int64_t radius)
      : dim_(w.dim()), radius_(radius), side_(2 * radius + 1) {
    values_.reserve(box_size(dim_, radius));
    for_each_in_box(dim_, radius, [&](const FreqVector& g) {
      values_.push_back(w.has_value(g) ? w(g) : 0.0);
    });
    center_ = offset(FreqVector(std::vector<std::int64_t>(dim_, radius)));
  }

  // Linear offset of v relative to the table origin, without the centering.
  std::int64_t offset(const FreqVector& v) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < dim_; ++i) idx = idx * side_ + v[i];
    return idx;
  }

  double at_offset(std::int64_t off) const {
    return values_[static_cast<std::size_t>(center_ + off)];
  }

 private:
  std::size_t dim_;
  std::int64_t radius_;
  std::int64_t side_;
  std::int64_t center_ = 0;
  std::vector<double> values_;
};

struct PassResult {
  std::vector<Interval> brackets;
};

struct PassLimits {
  std::size_t max_table;
  double max_work;
};

// Brackets (lambda * lambda)(g) for every g in `targets` using the
// partial sum over |beta|_inf <= radius. Returns false if the pass would
// exceed the limits.
bool convolution_pass(const Weight& w, const std::vector<FreqVector>& targets,
                      std::int64_t radius, const PassLimits& limits, PassResult& out) {
  const std::size_t d = w.dim();
  const std::int64_t table_radius_limit = custom_radius(w);
  const std::int64_t reff = std::min(radius, table_radius_limit);

  std::int64_t max_target = 0;
  for (const auto& g : targets) max_target = std::max(max_target, g.norm_inf());

  const std::int64_t m = reff + max_target;
  if (box_size(d, m) > limits.max_table) return false;
  const double work = static_cast<double>(box_size(d, reff)) * static_cast<double>(targets.size());
  if (work > limits.max_work) return false;

  const DenseTable table(w, m);
  std::vector<std::int64_t> beta_off;
  std::vector<double> beta_val;
  beta_off.reserve(box_size(d, reff));
  beta_val.reserve(box_size(d, reff));
  for_each_in_box(d, reff, [&](const FreqVector& b) {
    beta_off.push_back(table.offset(b));
    beta_val.push_back(table.at_offset(table.offset(b)));
  });

  const double tail = w.tail_mass(reff).bound;
  const bool custom = w.is_custom();
  const double custom_unknown =
      custom ? w.sup() * std::get<CustomTable>(w.family()).declared_tail.value_or(0.0) : 0.0;

  out.brackets.clear();
  out.brackets.reserve(targets.size());
  for (const auto& g : targets) {
    const std::int64_t g_off = table.offset(g);
    CompensatedSum acc;
    for (std::size_t j = 0; j < beta_off.size(); ++j) {
      acc.add(beta_val[j] * table.at_offset(g_off - beta_off[j]));
    }
    const double lo = acc.value();
    // beta outside the box: |g - beta|_inf > reff - |g|_inf.
    double rem = w.sup_beyond(static_cast<double>(reff - g.norm_inf())) * tail;
    // beta inside the box but g - beta outside a custom table.
    if (custom && g.norm_inf() + reff > table_radius_limit) rem += custom_unknown;
    out.brackets.push_back({lo * (1.0 - kRoundingSlack), (lo + rem) * (1.0 + kRoundingSlack)});
  }
  return true;
}

template <class Ratio>
WindowConstant window_max(const Weight& w, std::int64_t window, Ratio ratio) {
  if (window < 0) throw InvalidArgument("weight_analysis: window must be nonnegative");
  if (w.is_custom() && 2 * window > custom_radius(w)) {
    throw Unsupported("weight_analysis: custom table does not cover twice the window");
  }
  const std::size_t d = w.dim();
  const auto pts = box(d, window);
  // -log lambda on the doubled box, indexed like DenseTable.
  const std::int64_t m = 2 * window;
  const std::int64_t side = 2 * m + 1;
  std::vector<double> neg_log;
  neg_log.reserve(box_size(d, m));
  for_each_in_box(d, m, [&](const FreqVector& g) { neg_log.push_back(-w.log_value(g)); });
  auto index = [&](const FreqVector& v) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d; ++i) idx = idx * side + static_cast<std::size_t>(v[i] + m);
    return idx;
  };
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) idx[i] = index(pts[i]);
  const std::size_t zero = index(FreqVector::zero(d));

  WindowConstant out;
  out.window = window;
  out.constant = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    const double la = neg_log[idx[a]];
    for (std::size_t b = 0; b < pts.size(); ++b) {
      const double lb = neg_log[idx[b]];
      const double ls = neg_log[idx[a] + idx[b] - zero];
      const double r = ratio(ls, la, lb);
      if (r > out.constant) {
        out.constant = r;
        out.arg_a = pts[a];
        out.arg_b = pts[b];
      }
    }
  }
  return out;
}

}  // namespace

const char* to_string(Verdict v) {
  return v == Verdict::certified_bounded ? "certified-bounded" : "inconclusive";
}

Interval convolve_at(const Weight& w, const FreqVector& gamma, std::int64_t radius) {
  if (gamma.dim() != w.dim()) throw DimensionMismatch("convolve_at: dimension mismatch");
  if (radius < 0) throw InvalidArgument("convolve_at: radius must be nonnegative");
  PassResult res;
  const PassLimits limits{std::size_t{1} << 26, 1e11};
  if (!convolution_pass(w, {gamma}, radius, limits, res)) {
    throw ResourceError("convolve_at: truncation box exceeds the size cap");
  }
  return res.brackets.front();
}

ConvolutionReport subconvolutivity_report(const Weight& w, std::int64_t window,
                                          const ReportOptions& options) {
  if (window < 1) throw InvalidArgument("subconvolutivity_report: window must be >= 1");
  if (!(options.tol > 0.0)) throw InvalidArgument("subconvolutivity_report: tol must be positive");

  const auto targets = box(w.dim(), window);
  std::vector<double> lambda(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!w.has_value(targets[i])) {
      throw Unsupported("subconvolutivity_report: custom table does not cover the window");
    }
    lambda[i] = w(targets[i]);
  }

  ConvolutionReport report;
  report.window = window;
  const PassLimits limits{options.max_table, options.max_work};
  std::int64_t radius = options.initial_radius > 0 ? options.initial_radius
                                                   : std::max<std::int64_t>(window, 8);
  int stable = 0;
  PassResult pass;
  while (true) {
    if (!convolution_pass(w, targets, radius, limits, pass)) {
      if (report.history.empty()) {
        throw ResourceError("subconvolutivity_report: first pass exceeds the resource cap");
      }
      break;
    }
    double cmax = 0.0;
    double corr = 0.0;
    std::vector<Offender> ranked;
    ranked.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double r = pass.brackets[i].hi / lambda[i];
      cmax = std::max(cmax, r);
      corr = std::max(corr, pass.brackets[i].hi - pass.brackets[i].lo);
      ranked.push_back({targets[i], r});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Offender& a, const Offender& b) { return a.ratio > b.ratio; });
    if (ranked.size() > 5) ranked.resize(5);

    if (!report.history.empty()) {
      const double prev = report.history.back().second;
      stable = std::abs(cmax - prev) < options.tol * cmax ? stable + 1 : 0;
    }
    report.history.emplace_back(radius, cmax);
    report.radius = radius;
    report.constant = cmax;
    report.tail_correction = corr;
    report.worst = std::move(ranked);

    if (stable >= options.stable_passes) {
      report.verdict = Verdict::certified_bounded;
      return report;
    }
    if (radius > options.max_radius / 2) break;
    radius *= 2;
  }
  report.verdict = Verdict::inconclusive;
  return report;
}

WindowConstant subadditivity_report(const Weight& w, std::int64_t window) {
  // inv(s) / (inv(a) + inv(b)) with inv = exp(neg_log), evaluated in log space.
  return window_max(w, window, [](double ls, double la, double lb) {
    const double hi = std::max(la, lb);
    const double lo = std::min(la, lb);
    return std::exp(ls - hi - std::log1p(std::exp(lo - hi)));
  });
}

WindowConstant submultiplicativity_report(const Weight& w, std::int64_t window) {
  return window_max(w, window,
                    [](double ls, double la, double lb) { return std::exp(ls - la - lb); });
}

SquareReport square_preserves_subconvolutivity(const Weight& xi, std::int64_t window,
                                               const ReportOptions& options) {
  SquareReport out;
  out.xi = subconvolutivity_report(xi, window, options);
  out.lambda = subconvolutivity_report(xi.squared(), window, options);
  out.holds = out.lambda.constant <= out.xi.constant * out.xi.constant * (1.0 + options.tol);
  const bool both = out.xi.verdict == Verdict::certified_bounded &&
                    out.lambda.verdict == Verdict::certified_bounded;
  out.verdict = both ? Verdict::certified_bounded : Verdict::inconclusive;
  return out;
}

}  // namespace rkha
