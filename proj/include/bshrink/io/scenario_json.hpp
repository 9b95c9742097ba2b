#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "bshrink/errors.hpp"
#include "bshrink/sim_models/scenarios.hpp"

namespace bshrink {

/// Scenario file layout:
///   { "name": "...", "lambda": 2, "scale_multiplier": 1, "additive": 0,
///     "response": "continuous", "grid_nodes": 512,
///     "error": {"law": "student_t", "df": 6},
///     "regression": {"kind": "bell", "amplitude": 2, "center": 0.5, "width": 0.15,
///                    "coefficients": []} }
/// Missing keys keep their defaults.
inline void to_json(nlohmann::json& j, const ScenarioSpec& s) {
  nlohmann::json err{{"law", s.error.name()}};
  if (s.error.kind == ErrorLaw::Kind::student_t) err["df"] = s.error.df;
  const char* kind = s.regression.kind == RegressionShape::Kind::bell            ? "bell"
                     : s.regression.kind == RegressionShape::Kind::cosine_series ? "cosine_series"
                                                                                 : "constant";
  j = nlohmann::json{{"name", s.name},
                     {"lambda", s.lambda},
                     {"scale_multiplier", s.scale_multiplier},
                     {"additive", static_cast<int>(s.additive)},
                     {"response", to_string(s.response)},
                     {"grid_nodes", s.grid_nodes},
                     {"error", err},
                     {"regression",
                      {{"kind", kind},
                       {"amplitude", s.regression.amplitude},
                       {"center", s.regression.center},
                       {"width", s.regression.width},
                       {"coefficients", s.regression.coefficients}}}};
}

[[nodiscard]] inline ErrorLaw error_law_from_name(const std::string& law, double df = 0.0) {
  if (law == "standard_normal") return ErrorLaw::standard_normal();
  if (law == "uniform") return ErrorLaw::uniform();
  if (law == "student_t") return ErrorLaw::student_t(df);
  if (law == "two_point") return ErrorLaw::two_point();
  throw ValidationError("unknown error law '" + law + "'");
}

inline void from_json(const nlohmann::json& j, ScenarioSpec& s) {
  try {
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("lambda")) s.lambda = j.at("lambda").get<double>();
    if (j.contains("scale_multiplier")) s.scale_multiplier = j.at("scale_multiplier").get<double>();
    if (j.contains("additive")) {
      const int g = j.at("additive").get<int>();
      if (g < 0 || g > 3) throw ValidationError("scenario: additive must be 0..3");
      s.additive = static_cast<AdditiveChoice>(g);
    }
    if (j.contains("response")) s.response = parse_response_kind(j.at("response").get<std::string>());
    if (j.contains("grid_nodes")) s.grid_nodes = j.at("grid_nodes").get<std::size_t>();
    if (j.contains("error")) {
      const auto& e = j.at("error");
      s.error = error_law_from_name(e.value("law", std::string("standard_normal")), e.value("df", 0.0));
    }
    if (j.contains("regression")) {
      const auto& r = j.at("regression");
      const std::string kind = r.value("kind", std::string("bell"));
      if (kind == "bell") s.regression.kind = RegressionShape::Kind::bell;
      else if (kind == "cosine_series") s.regression.kind = RegressionShape::Kind::cosine_series;
      else if (kind == "constant") s.regression.kind = RegressionShape::Kind::constant;
      else throw ValidationError("scenario: unknown regression kind '" + kind + "'");
      s.regression.amplitude = r.value("amplitude", s.regression.amplitude);
      s.regression.center = r.value("center", s.regression.center);
      s.regression.width = r.value("width", s.regression.width);
      if (r.contains("coefficients")) s.regression.coefficients = r.at("coefficients").get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
  s.validate();
}

}  // namespace bshrink
