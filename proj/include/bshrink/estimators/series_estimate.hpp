#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bshrink/block_scheme.hpp"
#include "bshrink/errors.hpp"
#include "bshrink/estimators/guards.hpp"
#include "bshrink/function_space/basis.hpp"
#include "bshrink/function_space/expansion.hpp"
#include "bshrink/function_space/grid_function.hpp"
#include "bshrink/io/csv.hpp"
#include "bshrink/sim_models/model.hpp"

namespace bshrink {

/// f_hat(x) = sum_k mu_k sum_{j in B_k} theta_hat_j phi_j(x).
struct SeriesEstimate {
  std::string tag;
  BlockScheme scheme;
  std::vector<double> theta_hat;     // raw coefficient statistics, one per frequency of the scheme
  std::vector<double> block_energy;  // Theta_hat_k (or Theta_k for the oracle)
  std::vector<double> weights;       // mu_k in [0, 1]
  double d_hat = 0.0;
  GuardLog guards;

  [[nodiscard]] double coefficient(std::size_t j) const {
    if (j >= theta_hat.size()) return 0.0;
    return weights[scheme.block_of(j)] * theta_hat[j];
  }

  [[nodiscard]] std::vector<double> coefficients() const {
    std::vector<double> out(theta_hat.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = coefficient(j);
    return out;
  }

  [[nodiscard]] CoefficientExpansion expansion() const {
    const auto c = coefficients();
    if (c.empty()) return CoefficientExpansion({0});
    return CoefficientExpansion({c.size() - 1}, c);
  }

  [[nodiscard]] double operator()(double x) const {
    std::vector<double> table(theta_hat.size());
    cos_basis_values(std::clamp(x, 0.0, 1.0), table);
    double acc = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) acc += coefficient(j) * table[j];
    return acc;
  }

  [[nodiscard]] GridFunction on_grid(std::size_t nodes) const {
    const auto e = expansion();
    if (2 * e.bounds()[0] < nodes) return e.on_grid({nodes});
    return GridFunction::sample_1d(nodes, [this](double x) { return (*this)(x); });
  }
};

/// Blockwise shrinkage: mu_k = Theta_k / (Theta_k + d/n) when Theta_k > 1/(b n)
/// strictly, otherwise 0.
[[nodiscard]] inline SeriesEstimate assemble_estimate(std::vector<double> theta_hat, std::vector<double> block_energy,
                                                      double d_hat, const BlockScheme& scheme) {
  if (!(d_hat > 0.0) || !std::isfinite(d_hat)) throw GuardError("assemble_estimate: d_hat must be positive");
  if (block_energy.size() != scheme.K || theta_hat.size() != scheme.coefficient_count()) {
    throw ValidationError("assemble_estimate: statistics do not cover the block scheme");
  }
  const double n = static_cast<double>(scheme.n);
  const double threshold = 1.0 / (static_cast<double>(scheme.b) * n);
  SeriesEstimate est;
  est.scheme = scheme;
  est.theta_hat = std::move(theta_hat);
  est.block_energy = std::move(block_energy);
  est.d_hat = d_hat;
  est.weights.resize(scheme.K, 0.0);
  for (std::size_t k = 0; k < scheme.K; ++k) {
    const double T = est.block_energy[k];
    if (T > threshold) est.weights[k] = T / (T + d_hat / n);
  }
  return est;
}

/// Oracle shrinkage with the true block energies Theta_k = L_k^{-1} sum theta_j^2
/// and the true d, without thresholding. theta must cover every frequency of the scheme.
[[nodiscard]] inline std::vector<double> oracle_weights(const std::vector<double>& theta, double d,
                                                        const BlockScheme& scheme, std::vector<double>* energy = nullptr) {
  if (!(d > 0.0)) throw ValidationError("oracle_estimate: d must be positive");
  if (theta.size() < scheme.coefficient_count()) throw ValidationError("oracle_estimate: theta does not cover the scheme");
  const double n = static_cast<double>(scheme.n);
  std::vector<double> w(scheme.K), e(scheme.K);
  for (std::size_t k = 0; k < scheme.K; ++k) {
    const auto& B = scheme.blocks[k];
    double s = 0.0;
    for (std::size_t j = B.first; j <= B.last(); ++j) s += theta[j] * theta[j];
    e[k] = s / static_cast<double>(B.length);
    w[k] = e[k] / (e[k] + d / n);
  }
  if (energy) *energy = std::move(e);
  return w;
}

/// Oracle estimate with shrinkage applied to the true coefficients.
[[nodiscard]] inline SeriesEstimate oracle_estimate(const std::vector<double>& theta, double d,
                                                    const BlockScheme& scheme) {
  SeriesEstimate est;
  est.tag = "oracle";
  est.scheme = scheme;
  est.weights = oracle_weights(theta, d, scheme, &est.block_energy);
  est.theta_hat.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(scheme.coefficient_count()));
  est.d_hat = d;
  return est;
}

/// Oracle shrinkage applied to estimated coefficients theta_hat.
[[nodiscard]] inline SeriesEstimate oracle_estimate(const std::vector<double>& theta, double d,
                                                    const BlockScheme& scheme, std::vector<double> theta_hat) {
  auto est = oracle_estimate(theta, d, scheme);
  if (theta_hat.size() != scheme.coefficient_count()) throw ValidationError("oracle_estimate: theta_hat size mismatch");
  est.theta_hat = std::move(theta_hat);
  return est;
}

/// Clamps d_tilde into [(C2 b)^{-1/4}, (C2 b)^{1/4}].
[[nodiscard]] inline double d_hat_projection(double d_tilde, const BlockScheme& scheme, double C2 = 1.0) {
  if (!(C2 >= 1.0)) throw ValidationError("d_hat_projection: C2 must be >= 1");
  const double hi = std::pow(C2 * static_cast<double>(scheme.b), 0.25);
  return std::clamp(d_tilde, 1.0 / hi, hi);
}

/// Pointwise range restriction of an estimate for discrete responses:
/// [delta, 1 - delta] for Bernoulli, [delta, inf) for Poisson.
[[nodiscard]] inline GridFunction bona_fide_clamp(const GridFunction& values, ResponseKind kind, double delta = 1e-3) {
  if (!(delta > 0.0 && delta < 0.5)) throw ValidationError("bona_fide_clamp: delta must be in (0, 0.5)");
  switch (kind) {
    case ResponseKind::bernoulli: return values.map([delta](double v) { return std::clamp(v, delta, 1.0 - delta); });
    case ResponseKind::poisson: return values.map([delta](double v) { return std::max(v, delta); });
    case ResponseKind::continuous: break;
  }
  throw ValidationError("bona_fide_clamp: only defined for Bernoulli and Poisson responses");
}

[[nodiscard]] inline GridFunction bona_fide_clamp(const SeriesEstimate& est, ResponseKind kind, double delta = 1e-3,
                                                  std::size_t nodes = 512) {
  return bona_fide_clamp(est.on_grid(nodes), kind, delta);
}

inline void to_json(nlohmann::json& j, const SeriesEstimate& e) {
  j = nlohmann::json{{"tag", e.tag},
                     {"coefficients", e.coefficients()},
                     {"theta_hat", e.theta_hat},
                     {"block_energy", e.block_energy},
                     {"weights", e.weights},
                     {"d_hat", e.d_hat},
                     {"scheme", e.scheme},
                     {"guard_events", e.guards}};
}

/// Curve samples f_hat(i / (points - 1)), i = 0..points-1, as `x,f_hat` CSV.
inline void write_curve_csv(std::ostream& os, const SeriesEstimate& e, std::size_t points = 201) {
  if (points < 2) throw ValidationError("write_curve_csv: need at least 2 points");
  os << "x,f_hat\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(points - 1);
    os << format_double(x) << ',' << format_double(e(x)) << '\n';
  }
}

}  // namespace bshrink
