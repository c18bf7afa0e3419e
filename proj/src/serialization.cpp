#include "rkha/serialization.hpp"

#include <cmath>
#include <limits>

#include "rkha/errors.hpp"

namespace rkha {

using nlohmann::json;

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("field '") + key + "' has the wrong type");
  }
}

// JSON has no inf/nan; write them as strings so reports never lose a value.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

json to_json(const FreqVector& g) {
  return json(std::vector<std::int64_t>(g.components().begin(), g.components().end()));
}

FreqVector freq_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("frequency vector must be an integer array");
  std::vector<std::int64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InvalidArgument("frequency vector must be an integer array");
    c.push_back(v.get<std::int64_t>());
  }
  return FreqVector(std::move(c));
}

json to_json(const TorusPoint& x) {
  return json(std::vector<double>(x.coords().begin(), x.coords().end()));
}

TorusPoint point_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("torus point must be a nonempty number array");
  std::vector<double> c;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidArgument("torus point must be a nonempty number array");
    c.push_back(v.get<double>());
  }
  return TorusPoint(std::move(c));
}

json to_json(const Weight& w) {
  json j;
  j["d"] = w.dim();
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, Subexponential>) {
          j["family"] = "subexponential";
          j["tau"] = fam.tau;
          j["p"] = fam.p;
          j["norm"] = to_string(fam.norm);
        } else if constexpr (std::is_same_v<T, PolynomialDecay>) {
          j["family"] = "polynomial";
          j["s"] = fam.s;
          j["norm"] = to_string(fam.norm);
        } else {
          j["family"] = "custom";
          j["radius"] = fam.radius;
          j["table"] = fam.values;
          if (fam.declared_tail) j["tail"] = *fam.declared_tail;
        }
      },
      w.family());
  return j;
}

Weight weight_from_json(const json& j) {
  const auto family = required<std::string>(j, "family");
  const auto d = required<std::size_t>(j, "d");
  const auto norm = j.contains("norm") ? lattice_norm_from_string(required<std::string>(j, "norm"))
                                       : LatticeNorm::l2;
  if (family == "subexponential") {
    return Weight::subexponential(d, required<double>(j, "tau"), required<double>(j, "p"), norm);
  }
  if (family == "polynomial") return Weight::polynomial(d, required<double>(j, "s"), norm);
  if (family == "custom") {
    std::optional<double> tail;
    if (j.contains("tail")) tail = required<double>(j, "tail");
    return Weight::custom(d, required<std::int64_t>(j, "radius"),
                          required<std::vector<double>>(j, "table"), tail);
  }
  throw InvalidArgument("unknown weight family '" + family + "'");
}

json to_json(const FourierPoly& f) {
  json coeffs = json::array();
  for (const auto& [g, c] : f.coeffs()) {
    coeffs.push_back({{"gamma", to_json(g)}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"weight", to_json(f.weight())}, {"coeffs", coeffs}};
}

FourierPoly poly_from_json(const json& j, const Weight* fallback) {
  if (!j.is_object()) throw InvalidArgument("polynomial must be an object");
  if (!j.contains("weight") && fallback == nullptr) throw InvalidArgument("missing field 'weight'");
  FourierPoly f(j.contains("weight") ? weight_from_json(j.at("weight")) : *fallback);
  const auto& coeffs = j.contains("coeffs") ? j.at("coeffs") : json::array();
  if (!coeffs.is_array()) throw InvalidArgument("field 'coeffs' must be an array");
  for (const auto& c : coeffs) {
    const FreqVector g = freq_from_json(c.contains("gamma") ? c.at("gamma") : json());
    if (g.dim() != f.dim()) throw DimensionMismatch("coefficient frequency has the wrong dimension");
    const double re = c.contains("re") ? required<double>(c, "re") : 0.0;
    const double im = c.contains("im") ? required<double>(c, "im") : 0.0;
    f.add(g, {re, im});
  }
  return f;
}

json to_json(const AtomicMeasure& nu) {
  json atoms = json::array();
  for (const auto& [x, m] : nu.atoms()) atoms.push_back({{"x", to_json(x)}, {"w", m}});
  return {{"atoms", atoms}};
}

AtomicMeasure measure_from_json(const json& j) {
  const auto& atoms = j.is_object() && j.contains("atoms") ? j.at("atoms") : json();
  if (!atoms.is_array()) throw InvalidArgument("measure needs an 'atoms' array");
  std::vector<AtomicMeasure::Atom> out;
  for (const auto& a : atoms) {
    out.emplace_back(point_from_json(a.contains("x") ? a.at("x") : json()), required<double>(a, "w"));
  }
  return AtomicMeasure(std::move(out));
}

json to_json(const ConvolutionReport& r) {
  json worst = json::array();
  for (const auto& o : r.worst) worst.push_back({{"gamma", to_json(o.gamma)}, {"ratio", number(o.ratio)}});
  json history = json::array();
  for (const auto& [radius, c] : r.history) history.push_back({{"radius", radius}, {"constant", number(c)}});
  return {{"window", r.window},
          {"radius", r.radius},
          {"constant", number(r.constant)},
          {"tail_correction", number(r.tail_correction)},
          {"verdict", to_string(r.verdict)},
          {"worst", worst},
          {"history", history}};
}

json to_json(const WindowConstant& c) {
  return {{"window", c.window},
          {"constant", number(c.constant)},
          {"arg_a", to_json(c.arg_a)},
          {"arg_b", to_json(c.arg_b)}};
}

json to_json(const AlgebraResult& r) {
  return {{"residual", number(r.residual)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"bandwidth", r.value.bandwidth()}};
}

json to_json(const SpectrumProbe& p) {
  return {{"z", {p.z.real(), p.z.imag()}},
          {"invertible", p.invertible},
          {"residual", number(p.residual)},
          {"reason", p.reason}};
}

}  // namespace rkha
