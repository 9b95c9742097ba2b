#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/basis.hpp"
#include "bshrink/function_space/grid_function.hpp"
#include "bshrink/sim_models/error_law.hpp"
#include "bshrink/sim_models/model.hpp"

namespace bshrink {

/// Additive nuisance components used in the simulation grid.
enum class AdditiveChoice { zero = 0, g1 = 1, g2 = 2, g3 = 3 };

/// g1(z) = z - 1/2, g2(z) = z^2 - 1/3, g3(z) = z + z^3 - 3/4; each integrates to zero.
[[nodiscard]] inline double additive_component(AdditiveChoice choice, double z) noexcept {
  switch (choice) {
    case AdditiveChoice::zero: return 0.0;
    case AdditiveChoice::g1: return z - 0.5;
    case AdditiveChoice::g2: return z * z - 1.0 / 3.0;
    case AdditiveChoice::g3: return z + z * z * z - 0.75;
  }
  return 0.0;
}

/// sigma(x, z) = e^{lambda z / 2}.
[[nodiscard]] inline double exponential_scale(double lambda, double z) noexcept { return std::exp(0.5 * lambda * z); }

/// Test regression function. The default is a bell curve centred at 0.5 with
/// width 0.15 and peak 2; Bernoulli scenarios rescale it into [0.1, 0.9] and
/// Poisson scenarios shift it so that its minimum is 0.5. A cosine series or
/// a constant can be used instead.
struct RegressionShape {
  enum class Kind { bell, cosine_series, constant };
  Kind kind = Kind::bell;
  double amplitude = 2.0;  // bell peak, or the constant value
  double center = 0.5;
  double width = 0.15;
  std::vector<double> coefficients{};  // cosine_series: theta_0, theta_1, ...

  [[nodiscard]] double bell_unit(double x) const noexcept {
    const double u = (x - center) / width;
    return std::exp(-0.5 * u * u);
  }

  /// Regression value for the given response kind.
  [[nodiscard]] double operator()(double x, ResponseKind response) const {
    switch (kind) {
      case Kind::constant: return amplitude;
      case Kind::cosine_series: {
        double acc = 0.0;
        for (std::size_t j = 0; j < coefficients.size(); ++j) acc += coefficients[j] * cos_basis(j, x);
        return acc;
      }
      case Kind::bell: break;
    }
    const double b = bell_unit(x);
    const double b_min = std::min(bell_unit(0.0), bell_unit(1.0));
    switch (response) {
      case ResponseKind::bernoulli: return 0.1 + 0.8 * (b - b_min) / (1.0 - b_min);
      case ResponseKind::poisson: return amplitude * (b - b_min) + 0.5;
      case ResponseKind::continuous: break;
    }
    return amplitude * b;
  }
};

/// Generating model of one simulation cell with D = 1 and a uniform design.
struct ScenarioSpec {
  std::string name;
  double lambda = 1.0;
  double scale_multiplier = 1.0;  // sigma = scale_multiplier * e^{lambda z / 2}
  AdditiveChoice additive = AdditiveChoice::zero;
  ResponseKind response = ResponseKind::continuous;
  ErrorLaw error{};
  RegressionShape regression{};
  std::size_t grid_nodes = 512;  // per axis

  void validate() const {
    if (!std::isfinite(lambda)) throw ValidationError("scenario '" + name + "': lambda must be finite");
    if (!(scale_multiplier > 0.0)) throw ValidationError("scenario '" + name + "': scale multiplier must be positive");
    if (grid_nodes < 16) throw ValidationError("scenario '" + name + "': grid needs at least 16 nodes per axis");
    if (regression.kind == RegressionShape::Kind::bell && !(regression.width > 0.0)) {
      throw ValidationError("scenario '" + name + "': bell width must be positive");
    }
  }
};

[[nodiscard]] inline RegressionModel make_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const std::size_t N = spec.grid_nodes;
  RegressionModel model;
  model.tag = spec.name;
  model.response = spec.response;
  model.error = spec.error;
  model.f = GridFunction::sample_1d(N, [&](double x) { return spec.regression(x, spec.response); });

  // Recentre on the grid so that the quadrature integral of g is zero to rounding.
  auto g = GridFunction::sample_1d(N, [&](double z) { return additive_component(spec.additive, z); });
  const double shift = g.integral();
  model.g = g.map([shift](double v) { return v - shift; });

  model.design = GridFunction::constant({N, N}, 1.0);
  if (spec.response == ResponseKind::continuous) {
    model.sigma = GridFunction::sample({N, N}, [&](std::span<const double> p) {
      return spec.scale_multiplier * exponential_scale(spec.lambda, p[1]);
    });
  } else {
    model.sigma = implied_scale_grid(spec.response, model.f, model.g, {N, N});
  }
  model.validate();
  return model;
}

[[nodiscard]] inline std::string scenario_name(double lambda, AdditiveChoice g) {
  std::string l = std::to_string(lambda);
  l.erase(l.find_last_not_of('0') + 1);
  if (!l.empty() && l.back() == '.') l.pop_back();
  return "lambda" + l + "_g" + std::to_string(static_cast<int>(g));
}

/// The 12 simulation cells (lambda in {1,2,3} x g in {0, g1, g2, g3}), a
/// homoscedastic cell, and Bernoulli and Poisson demonstrations.
[[nodiscard]] inline std::vector<ScenarioSpec> builtin_scenario_specs() {
  std::vector<ScenarioSpec> out;
  for (double lambda : {1.0, 2.0, 3.0}) {
    for (int g = 0; g <= 3; ++g) {
      ScenarioSpec s;
      s.lambda = lambda;
      s.additive = static_cast<AdditiveChoice>(g);
      s.name = scenario_name(lambda, s.additive);
      out.push_back(s);
    }
  }
  ScenarioSpec homo;
  homo.name = "homoscedastic";
  homo.lambda = 0.0;
  out.push_back(homo);

  ScenarioSpec bern;
  bern.name = "bernoulli_demo";
  bern.lambda = 0.0;
  bern.response = ResponseKind::bernoulli;
  out.push_back(bern);

  ScenarioSpec pois;
  pois.name = "poisson_demo";
  pois.lambda = 0.0;
  pois.response = ResponseKind::poisson;
  out.push_back(pois);
  return out;
}

[[nodiscard]] inline ScenarioSpec find_scenario(const std::string& name) {
  for (auto& s : builtin_scenario_specs())
    if (s.name == name) return s;
  throw ValidationError("unknown scenario '" + name + "'");
}

[[nodiscard]] inline std::vector<RegressionModel> builtin_scenarios() {
  std::vector<RegressionModel> out;
  for (const auto& s : builtin_scenario_specs()) out.push_back(make_scenario(s));
  return out;
}

}  // namespace bshrink
