#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/grid_function.hpp"
#include "bshrink/sim_models/model.hpp"

namespace bshrink {

struct DifficultyCoefficients {
  double d = 0.0;                 // int dx / int p sigma^{-2} dz
  double d2 = 0.0;                // E{sigma^2(X,Z) / p(X)^2}
  std::optional<double> d1;       // int sigma^2(x) / p(x) dx, only when sigma is free of z
};

/// Coefficients of difficulty of a design density p and scale sigma, both on
/// [0,1]^{1+D}. If the grids differ, sigma is resampled onto p's grid.
[[nodiscard]] inline DifficultyCoefficients coefficient_of_difficulty(const GridFunction& design,
                                                                      const GridFunction& sigma) {
  if (design.dimension() != sigma.dimension() || design.dimension() < 2) {
    throw ValidationError("coefficient_of_difficulty: p and sigma must share a (1+D)-dimensional domain");
  }
  const GridFunction s = sigma.same_shape(design) ? sigma : sigma.resample(design.shape());
  const std::size_t nx = design.nodes(0);
  const std::size_t inner = design.size() / nx;
  const auto pv = design.values();
  const auto sv = s.values();

  double d = 0.0, d2 = 0.0, d1 = 0.0;
  double z_variation = 0.0;
  const double s_scale = s.max_value();
  for (std::size_t a = 0; a < nx; ++a) {
    double marginal = 0.0, weighted_inv = 0.0, weighted_var = 0.0;
    double smin = sv[a * inner], smax = sv[a * inner];
    for (std::size_t b = 0; b < inner; ++b) {
      const double p = pv[a * inner + b];
      const double sg = sv[a * inner + b];
      marginal += p;
      weighted_inv += p / (sg * sg);
      weighted_var += p * sg * sg;
      smin = std::min(smin, sg);
      smax = std::max(smax, sg);
    }
    marginal /= static_cast<double>(inner);
    weighted_inv /= static_cast<double>(inner);
    weighted_var /= static_cast<double>(inner);
    if (!(marginal > 1e-12) || !(weighted_inv > 1e-12)) {
      throw GuardError("coefficient_of_difficulty: degenerate design (marginal density vanishes near x = " +
                       std::to_string(GridFunction::node(a, nx)) + ")");
    }
    d += 1.0 / weighted_inv;
    d2 += weighted_var / (marginal * marginal);
    const double sx = sv[a * inner];
    d1 += sx * sx / marginal;
    z_variation = std::max(z_variation, smax - smin);
  }
  DifficultyCoefficients out;
  out.d = d / static_cast<double>(nx);
  out.d2 = d2 / static_cast<double>(nx);
  if (z_variation <= 1e-12 * s_scale) out.d1 = d1 / static_cast<double>(nx);
  return out;
}

[[nodiscard]] inline DifficultyCoefficients coefficient_of_difficulty(const RegressionModel& model) {
  return coefficient_of_difficulty(model.design, model.sigma);
}

/// Sample size at which a scale-ignoring estimator matches the weighted one:
/// floor(n d2 / d). A relative slack of 1e-12 protects exact integers from
/// rounding down.
[[nodiscard]] inline std::size_t inflated_sample_size(std::size_t n, const DifficultyCoefficients& c) {
  if (!(c.d > 0.0)) throw ValidationError("inflated_sample_size: d must be positive");
  const double m = static_cast<double>(n) * c.d2 / c.d;
  return static_cast<std::size_t>(std::floor(m * (1.0 + 1e-12)));
}

[[nodiscard]] inline std::size_t inflated_sample_size(std::size_t n, const RegressionModel& model) {
  return inflated_sample_size(n, coefficient_of_difficulty(model));
}

}  // namespace bshrink
