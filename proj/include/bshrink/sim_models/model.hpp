#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/grid_function.hpp"
#include "bshrink/sim_models/error_law.hpp"

namespace bshrink {

enum class ResponseKind { continuous, bernoulli, poisson };

[[nodiscard]] inline std::string to_string(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::continuous: return "continuous";
    case ResponseKind::bernoulli: return "bernoulli";
    case ResponseKind::poisson: return "poisson";
  }
  return "continuous";
}

[[nodiscard]] inline ResponseKind parse_response_kind(const std::string& s) {
  if (s == "continuous") return ResponseKind::continuous;
  if (s == "bernoulli") return ResponseKind::bernoulli;
  if (s == "poisson") return ResponseKind::poisson;
  throw ValidationError("unknown response kind '" + s + "'");
}

/// Y = f(X) + g(Z) + sigma(X,Z) eps with (X,Z) ~ p on [0,1]^{1+D}. For
/// Bernoulli and Poisson responses the conditional mean is f + g and sigma
/// holds the implied conditional standard deviation.
struct RegressionModel {
  std::string tag;
  GridFunction f;       // on [0,1]
  GridFunction g;       // on [0,1]^D, zero integral
  GridFunction sigma;   // on [0,1]^{1+D}, positive
  GridFunction design;  // density on [0,1]^{1+D}
  ErrorLaw error{};
  ResponseKind response = ResponseKind::continuous;

  [[nodiscard]] std::size_t aux_dim() const noexcept { return g.dimension(); }

  /// f(x) + g(z); z holds aux_dim() coordinates.
  [[nodiscard]] double mean(double x, const double* z) const noexcept {
    return f.interpolate(&x) + g.interpolate(z);
  }

  /// sigma(x, z); z holds aux_dim() coordinates.
  [[nodiscard]] double scale(double x, const double* z) const noexcept {
    double pt[kMaxDim];
    pt[0] = x;
    for (std::size_t t = 0; t < aux_dim(); ++t) pt[t + 1] = z[t];
    return sigma.interpolate(pt);
  }

  [[nodiscard]] double density(double x, const double* z) const noexcept {
    double pt[kMaxDim];
    pt[0] = x;
    for (std::size_t t = 0; t < aux_dim(); ++t) pt[t + 1] = z[t];
    return design.interpolate(pt);
  }

  /// f(x) + g(z) at every node of a (1+D)-dimensional grid.
  [[nodiscard]] GridFunction mean_on_grid(const std::vector<std::size_t>& shape) const {
    return GridFunction::sample(shape, [&](std::span<const double> p) { return mean(p[0], p.data() + 1); });
  }

  void validate() const {
    if (f.empty() || g.empty() || sigma.empty() || design.empty()) {
      throw ValidationError("RegressionModel '" + tag + "': missing component");
    }
    if (f.dimension() != 1) throw ValidationError("RegressionModel: f must be univariate");
    const std::size_t D = g.dimension();
    if (D < 1 || D > kMaxAuxDim) throw ValidationError("RegressionModel: auxiliary dimension must be in [1, 3]");
    if (sigma.dimension() != D + 1 || design.dimension() != D + 1) {
      throw ValidationError("RegressionModel: sigma and p must live on [0,1]^{1+D}");
    }
    if (design.min_value() < 0.0) throw ValidationError("RegressionModel: design density is negative somewhere");
    if (std::abs(design.integral() - 1.0) > 1e-6) {
      throw ValidationError("RegressionModel: design density integrates to " + std::to_string(design.integral()));
    }
    if (std::abs(g.integral()) > 1e-6) {
      throw ValidationError("RegressionModel: additive component must integrate to zero");
    }
    if (!(sigma.min_value() > 0.0)) throw ValidationError("RegressionModel: scale must be positive");
    if (response != ResponseKind::continuous) {
      const auto q = mean_on_grid(sigma.shape());
      const double lo = q.min_value();
      const double hi = q.max_value();
      if (response == ResponseKind::bernoulli && !(lo > 0.0 && hi < 1.0)) {
        throw ValidationError("RegressionModel: Bernoulli mean must lie in (0,1)");
      }
      if (response == ResponseKind::poisson && !(lo > 0.0)) {
        throw ValidationError("RegressionModel: Poisson mean must be positive");
      }
    }
  }
};

/// Conditional standard deviation implied by a discrete response with mean q:
/// sqrt(q(1-q)) for Bernoulli and sqrt(q) for Poisson.
[[nodiscard]] inline double implied_scale(ResponseKind kind, double q) {
  switch (kind) {
    case ResponseKind::bernoulli: return std::sqrt(q * (1.0 - q));
    case ResponseKind::poisson: return std::sqrt(q);
    case ResponseKind::continuous: break;
  }
  throw ValidationError("implied_scale: only defined for discrete responses");
}

/// Scale function of a discrete response model with mean f0(x) + g(z),
/// sampled on the given (1+D)-dimensional grid.
[[nodiscard]] inline GridFunction implied_scale_grid(ResponseKind kind, const GridFunction& f0, const GridFunction& g,
                                                     const std::vector<std::size_t>& shape) {
  if (shape.size() != g.dimension() + 1) throw ValidationError("implied_scale_grid: shape must have 1+D axes");
  return GridFunction::sample(shape, [&](std::span<const double> p) {
    const double q = f0.interpolate(p.data()) + g.interpolate(p.data() + 1);
    if (kind == ResponseKind::bernoulli && !(q > 0.0 && q < 1.0)) {
      throw ValidationError("implied_scale_grid: Bernoulli mean outside (0,1)");
    }
    if (kind == ResponseKind::poisson && !(q > 0.0)) throw ValidationError("implied_scale_grid: Poisson mean <= 0");
    return implied_scale(kind, q);
  });
}

}  // namespace bshrink
