#pragma once

// JSON round trips for weights, Fourier polynomials and atomic measures, and
// JSON renderings of analysis reports.
//
// Weight:       {"family": "subexponential", "d": 1, "tau": 1, "p": 0.5, "norm": "l2"}
//               {"family": "polynomial", "d": 2, "s": 3, "norm": "linf"}
//               {"family": "custom", "d": 1, "radius": 2, "table": [...], "tail": 1e-3}
// FourierPoly:  {"weight": {...}, "coeffs": [{"gamma": [1], "re": 0.5, "im": 0}]}
// Measure:      {"atoms": [{"x": [0.25], "w": 1}]}

#include "json.hpp"

#include "rkha/algebra.hpp"
#include "rkha/embedding.hpp"
#include "rkha/weight_analysis.hpp"
#include "rkha/weights.hpp"

namespace rkha {

nlohmann::json to_json(const Weight& w);
Weight weight_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FourierPoly& f);
/// `fallback` supplies the weight when the object carries none.
FourierPoly poly_from_json(const nlohmann::json& j, const Weight* fallback = nullptr);

nlohmann::json to_json(const AtomicMeasure& nu);
AtomicMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FreqVector& g);
FreqVector freq_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TorusPoint& x);
TorusPoint point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConvolutionReport& r);
nlohmann::json to_json(const WindowConstant& c);
nlohmann::json to_json(const AlgebraResult& r);
nlohmann::json to_json(const SpectrumProbe& p);

}  // namespace rkha
