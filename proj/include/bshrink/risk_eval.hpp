#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bshrink/errors.hpp"
#include "bshrink/estimators/series_estimate.hpp"
#include "bshrink/function_space/function_family.hpp"
#include "bshrink/function_space/grid_function.hpp"
#include "bshrink/sim_models/difficulty.hpp"
#include "bshrink/sim_models/model.hpp"

namespace bshrink {

/// Integrated squared error int_0^1 (est - truth)^2 by the midpoint rule on `nodes` points.
[[nodiscard]] inline double ise(const GridFunction& estimate, const GridFunction& truth, std::size_t nodes = 512) {
  if (estimate.dimension() != 1 || truth.dimension() != 1) throw ValidationError("ise: both functions must be 1-D");
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = GridFunction::node(i, nodes);
    const double d = estimate.interpolate(&x) - truth.interpolate(&x);
    acc += d * d;
  }
  return acc / static_cast<double>(nodes);
}

[[nodiscard]] inline double ise(const SeriesEstimate& estimate, const GridFunction& truth, std::size_t nodes = 512) {
  return ise(estimate.on_grid(nodes), truth, nodes);
}

struct LowerBoundValue {
  double alpha = 1.0;
  double Q = 1.0;
  std::size_t n = 0;
  double d = 0.0;
  double value = 0.0;  // P(alpha, Q) (d / n)^{2 alpha / (2 alpha + 1)}
};

inline void to_json(nlohmann::json& j, const LowerBoundValue& b) {
  j = nlohmann::json{{"alpha", b.alpha}, {"Q", b.Q}, {"n", b.n}, {"d", b.d}, {"bound", b.value}};
}

/// Asymptotic minimax lower bound for a given coefficient of difficulty,
/// without the (1 + o(1)) factor.
[[nodiscard]] inline LowerBoundValue lower_bound(double d, double alpha, double Q, std::size_t n) {
  if (n == 0) throw ValidationError("lower_bound: n must be positive");
  if (!(d > 0.0)) throw ValidationError("lower_bound: d must be positive");
  LowerBoundValue b{alpha, Q, n, d, 0.0};
  b.value = pinsker_constant(alpha, Q) * std::pow(d / static_cast<double>(n), 2.0 * alpha / (2.0 * alpha + 1.0));
  return b;
}

/// Lower bound for a continuous-response model, with d from its design and scale.
[[nodiscard]] inline LowerBoundValue lower_bound(const RegressionModel& model, double alpha, double Q, std::size_t n) {
  return lower_bound(coefficient_of_difficulty(model).d, alpha, Q, n);
}

/// Lower bound for a Bernoulli or Poisson model around the pivot f0: the scale
/// is the one implied by the mean f0(x) + g(z).
[[nodiscard]] inline LowerBoundValue lower_bound(const RegressionModel& model, const GridFunction& pivot, double alpha,
                                                 double Q, std::size_t n) {
  if (model.response == ResponseKind::continuous) {
    throw ValidationError("lower_bound: a pivot is only used for discrete responses");
  }
  const auto sigma = implied_scale_grid(model.response, pivot, model.g, model.design.shape());
  return lower_bound(coefficient_of_difficulty(model.design, sigma).d, alpha, Q, n);
}

/// Per-replication ISE values of one estimator in one experiment cell.
struct RiskRecord {
  std::string tag;
  std::vector<double> ise;

  [[nodiscard]] std::size_t replications() const noexcept { return ise.size(); }

  [[nodiscard]] double aise() const {
    if (ise.empty()) throw ValidationError("RiskRecord '" + tag + "' has no replications");
    double s = 0.0;
    for (double v : ise) s += v;
    return s / static_cast<double>(ise.size());
  }

  /// Monte Carlo standard error of the AISE (0 for a single replication).
  [[nodiscard]] double se() const {
    const std::size_t R = ise.size();
    if (R < 2) return 0.0;
    const double m = aise();
    double s2 = 0.0;
    for (double v : ise) s2 += (v - m) * (v - m);
    return std::sqrt(s2 / static_cast<double>(R - 1) / static_cast<double>(R));
  }

  void validate() const {
    if (ise.empty()) throw ValidationError("RiskRecord '" + tag + "' has no replications");
    for (double v : ise) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("RiskRecord '" + tag + "' has an invalid ISE");
    }
  }
};

inline void to_json(nlohmann::json& j, const RiskRecord& r) {
  j = nlohmann::json{{"tag", r.tag}, {"replications", r.replications()}, {"aise", r.aise()}, {"se", r.se()},
                     {"ise", r.ise}};
}

struct Ratio {
  double value = 0.0;
  double se = 0.0;
};

/// AISE(num) / AISE(den) with a delta-method standard error that accounts for
/// pairing of replications by index.
[[nodiscard]] inline Ratio aise_ratio(const RiskRecord& num, const RiskRecord& den) {
  num.validate();
  den.validate();
  if (num.replications() != den.replications()) {
    throw ValidationError("aise_ratio: '" + num.tag + "' and '" + den.tag + "' have different replication counts");
  }
  const double a = num.aise(), b = den.aise();
  if (!(b > 0.0)) throw ValidationError("aise_ratio: denominator AISE is zero");
  Ratio r{a / b, 0.0};
  const std::size_t R = num.replications();
  if (R >= 2) {
    double s2 = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
      const double u = (num.ise[i] - r.value * den.ise[i]) / b;
      s2 += u * u;
    }
    r.se = std::sqrt(s2 / static_cast<double>(R - 1) / static_cast<double>(R));
  }
  return r;
}

/// Estimator tags used by the ratio table.
namespace tags {
inline const std::string D = "D";
inline const std::string S = "S";
inline const std::string En = "En";
inline const std::string Em = "Em";
inline const std::string S1 = "S1";
inline const std::string S2 = "S2";
inline const std::string S3 = "S3";
}  // namespace tags

/// R1 = S/D, R2 = En/S, R3 = Em/D and R_{3+s} = S_s/D. R4..R6 are present only
/// when the S_s records are.
struct RatioTable {
  std::array<std::optional<Ratio>, 6> r;
};

[[nodiscard]] inline RatioTable ratio_table(const std::map<std::string, RiskRecord>& records) {
  auto get = [&](const std::string& tag) -> const RiskRecord& {
    auto it = records.find(tag);
    if (it == records.end()) throw ValidationError("ratio_table: missing estimator record '" + tag + "'");
    return it->second;
  };
  RatioTable t;
  const auto& D = get(tags::D);
  const auto& S = get(tags::S);
  t.r[0] = aise_ratio(S, D);
  t.r[1] = aise_ratio(get(tags::En), S);
  t.r[2] = aise_ratio(get(tags::Em), D);
  const std::string extra[3] = {tags::S1, tags::S2, tags::S3};
  for (int s = 0; s < 3; ++s) {
    if (records.count(extra[s])) t.r[3 + s] = aise_ratio(records.at(extra[s]), D);
  }
  return t;
}

inline void to_json(nlohmann::json& j, const RatioTable& t) {
  j = nlohmann::json::object();
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    const std::string key = "R" + std::to_string(i + 1);
    if (t.r[i]) {
      j[key] = {{"value", t.r[i]->value}, {"se", t.r[i]->se}};
    } else {
      j[key] = nullptr;
    }
  }
}

}  // namespace bshrink
