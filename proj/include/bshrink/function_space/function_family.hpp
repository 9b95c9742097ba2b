#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/expansion.hpp"
#include "bshrink/function_space/grid_function.hpp"

namespace bshrink {

/// Sharp constant of the minimax MISE over the Sobolev ellipsoid S(alpha, Q):
///   [alpha / (pi (alpha + 1))]^{2 alpha / (2 alpha + 1)} [Q (2 alpha + 1)]^{1 / (2 alpha + 1)}.
[[nodiscard]] inline double pinsker_constant(double alpha, double Q) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw ValidationError("pinsker_constant: alpha must be >= 1");
  if (!(Q > 0.0) || !std::isfinite(Q)) throw ValidationError("pinsker_constant: Q must be positive and finite");
  const double rate = 2.0 * alpha / (2.0 * alpha + 1.0);
  return std::pow(alpha / (std::numbers::pi * (alpha + 1.0)), rate) *
         std::pow(Q * (2.0 * alpha + 1.0), 1.0 / (2.0 * alpha + 1.0));
}

/// Parameters of the family F(f0, rho_n, M_n, alpha, Q): functions equal to
/// the pivot on the first M_n cosine frequencies, with a Sobolev-bounded tail
/// whose sup-norm stays below rho_n. rho_n = +inf means "no sup-norm bound",
/// so F(0, inf, 0, alpha, Q) is the classical ellipsoid S(alpha, Q).
struct FunctionFamilySpec {
  GridFunction pivot;
  double rho = std::numeric_limits<double>::infinity();
  std::size_t low_frequencies = 0;  // M_n
  double alpha = 1.0;
  double Q = 1.0;

  void validate() const {
    if (pivot.dimension() != 1) throw ValidationError("FunctionFamilySpec: pivot must be a function on [0,1]");
    if (!(alpha >= 1.0)) throw ValidationError("FunctionFamilySpec: alpha must be >= 1");
    if (!(Q > 0.0)) throw ValidationError("FunctionFamilySpec: Q must be positive");
    if (!(rho > 0.0)) throw ValidationError("FunctionFamilySpec: rho must be positive (inf allowed)");
  }
};

struct MembershipReport {
  bool member = true;
  bool pivot_match = true;  // first M_n coefficients agree with the pivot
  bool ellipsoid = true;    // weighted tail energy <= Q
  bool sup_norm = true;     // sup |tail| < rho
  double max_pivot_deviation = 0.0;
  double tail_energy = 0.0;  // sum_{M_n <= j <= J} [1 + (pi j)^{2 alpha}] theta_j^2
  double tail_sup = 0.0;
  std::size_t truncation = 0;  // J; coefficients beyond J are not inspected
  bool tail_unverified = true;
  std::vector<std::string> violations;
};

/// Checks the finite-truncation version of the family conditions for f. The
/// infinite tail beyond `truncation` cannot be certified and is always
/// flagged as unverified. truncation = 0 selects the largest frequency the grid
/// resolves.
[[nodiscard]] inline MembershipReport family_membership(const GridFunction& f, const FunctionFamilySpec& spec,
                                                        std::size_t truncation = 0, double tolerance = 1e-8) {
  spec.validate();
  if (f.dimension() != 1) throw ValidationError("family_membership: f must be a function on [0,1]");
  if (!f.same_shape(spec.pivot)) throw ValidationError("family_membership: f and pivot must share a grid");
  const std::size_t limit = f.nodes(0) / 2 - 1;
  const std::size_t J = truncation == 0 ? limit : std::min(truncation, limit);

  MembershipReport report;
  report.truncation = J;
  const auto theta = fourier_coefficients(f, J);
  const auto theta0 = fourier_coefficients(spec.pivot, J);
  const std::size_t M = std::min(spec.low_frequencies, J + 1);

  for (std::size_t j = 0; j < M; ++j) {
    report.max_pivot_deviation =
        std::max(report.max_pivot_deviation, std::abs(theta.coefficients()[j] - theta0.coefficients()[j]));
  }
  report.pivot_match = report.max_pivot_deviation <= tolerance;

  CoefficientExpansion tail({J});
  for (std::size_t j = M; j <= J; ++j) {
    const double c = theta.coefficients()[j];
    const double weight = 1.0 + std::pow(std::numbers::pi * static_cast<double>(j), 2.0 * spec.alpha);
    report.tail_energy += weight * c * c;
    tail.coefficients()[j] = c;
  }
  report.ellipsoid = report.tail_energy <= spec.Q;

  const auto tail_values = tail.on_grid(f.shape());
  for (double v : tail_values.values()) report.tail_sup = std::max(report.tail_sup, std::abs(v));
  report.sup_norm = std::isinf(spec.rho) || report.tail_sup < spec.rho;

  if (!report.pivot_match) report.violations.emplace_back("low-frequency coefficients differ from the pivot");
  if (!report.ellipsoid) report.violations.emplace_back("Sobolev ellipsoid condition: weighted tail energy exceeds Q");
  if (!report.sup_norm) report.violations.emplace_back("sup-norm of the tail exceeds rho");
  report.member = report.pivot_match && report.ellipsoid && report.sup_norm;
  return report;
}

/// Smoothness class of a nuisance function on [0,1]^{1+D}: an analytic class
/// A(beta_0..beta_D, Q1) or a k-variate Sobolev class S_k with bound Q2.
struct SmoothnessClassSpec {
  enum class Kind { sobolev, analytic };
  Kind kind = Kind::analytic;
  std::size_t order = 1;        // k, sobolev only
  double bound = 1.0;           // Q1 (analytic) or Q2 (sobolev)
  std::vector<double> rates{};  // beta_0..beta_D, analytic only

  void validate() const {
    if (!(bound > 0.0) || !std::isfinite(bound)) throw ValidationError("SmoothnessClassSpec: bound must be finite and positive");
    if (kind == Kind::analytic) {
      if (rates.empty()) throw ValidationError("SmoothnessClassSpec: analytic class needs rates");
      for (double b : rates)
        if (!(b > 0.0)) throw ValidationError("SmoothnessClassSpec: rates must be positive");
    } else if (order < 1) {
      throw ValidationError("SmoothnessClassSpec: Sobolev order must be >= 1");
    }
  }

  /// Finite-truncation membership test on a coefficient array.
  [[nodiscard]] bool contains(const CoefficientExpansion& c) const {
    validate();
    bool ok = true;
    double energy = 0.0;
    c.for_each_index([&](std::size_t flat, std::span<const std::size_t> idx) {
      const double v = c.coefficients()[flat];
      if (kind == Kind::analytic) {
        if (rates.size() != idx.size()) throw ValidationError("SmoothnessClassSpec: rate count != dimension");
        double denom = 0.0;
        for (std::size_t t = 0; t < idx.size(); ++t) denom += std::exp(rates[t] * static_cast<double>(idx[t]));
        if (std::abs(v) > bound / denom) ok = false;
      } else {
        double w = 1.0;
        for (auto i : idx) w += std::pow(2.0 * std::numbers::pi * static_cast<double>(i), 2.0 * static_cast<double>(order));
        energy += w * v * v;
      }
    });
    return kind == Kind::analytic ? ok : energy <= bound;
  }
};

}  // namespace bshrink
