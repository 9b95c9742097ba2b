#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "bshrink/errors.hpp"
#include "bshrink/sim_models/rng.hpp"

namespace bshrink {

/// Regression error law with E eps = 0, E eps^2 = 1 and a finite fourth moment.
struct ErrorLaw {
  enum class Kind { standard_normal, uniform, student_t, two_point };

  Kind kind = Kind::standard_normal;
  double df = 0.0;  // student_t only

  [[nodiscard]] static ErrorLaw standard_normal() { return {}; }
  /// Uniform on [-sqrt 3, sqrt 3].
  [[nodiscard]] static ErrorLaw uniform() { return {Kind::uniform, 0.0}; }
  /// Student t scaled to unit variance; df >= 5 keeps the fourth moment finite.
  [[nodiscard]] static ErrorLaw student_t(double df) {
    if (!(df >= 5.0)) throw ValidationError("student_t error law needs df >= 5");
    return {Kind::student_t, df};
  }
  /// +1 or -1 with probability 1/2.
  [[nodiscard]] static ErrorLaw two_point() { return {Kind::two_point, 0.0}; }

  [[nodiscard]] std::string name() const {
    switch (kind) {
      case Kind::standard_normal: return "standard_normal";
      case Kind::uniform: return "uniform";
      case Kind::student_t: return "student_t";
      case Kind::two_point: return "two_point";
    }
    return "unknown";
  }

  /// Theoretical fourth moment.
  [[nodiscard]] double fourth_moment() const {
    switch (kind) {
      case Kind::standard_normal: return 3.0;
      case Kind::uniform: return 9.0 / 5.0;
      case Kind::student_t: return 3.0 * (df - 2.0) / (df - 4.0);
      case Kind::two_point: return 1.0;
    }
    return 3.0;
  }

  template <class R>
  [[nodiscard]] double draw(R& rng) const {
    switch (kind) {
      case Kind::standard_normal: {
        std::normal_distribution<double> d(0.0, 1.0);
        return d(rng);
      }
      case Kind::uniform: {
        std::uniform_real_distribution<double> d(-std::sqrt(3.0), std::sqrt(3.0));
        return d(rng);
      }
      case Kind::student_t: {
        std::student_t_distribution<double> d(df);
        return d(rng) * std::sqrt((df - 2.0) / df);
      }
      case Kind::two_point: {
        std::bernoulli_distribution d(0.5);
        return d(rng) ? 1.0 : -1.0;
      }
    }
    return 0.0;
  }
};

struct MomentCheck {
  double mean = 0.0;
  double second = 0.0;
  double fourth = 0.0;
  double mean_se = 0.0;
  double second_se = 0.0;
  bool passed = false;
};

/// Empirical moment contract: E eps and E eps^2 - 1 within `z` standard
/// errors of zero, and a finite empirical fourth moment.
[[nodiscard]] inline MomentCheck check_moment_contract(const ErrorLaw& law, std::size_t draws = 1'000'000,
                                                       std::uint64_t seed = 20130411, double z = 4.0) {
  auto rng = make_rng(seed);
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double e = law.draw(rng);
    const double e2 = e * e;
    s1 += e;
    s2 += e2;
    s4 += e2 * e2;
  }
  const double n = static_cast<double>(draws);
  MomentCheck out;
  out.mean = s1 / n;
  out.second = s2 / n;
  out.fourth = s4 / n;
  out.mean_se = std::sqrt(std::max(out.second - out.mean * out.mean, 0.0) / n);
  out.second_se = std::sqrt(std::max(out.fourth - out.second * out.second, 0.0) / n);
  out.passed = std::abs(out.mean) <= z * out.mean_se && std::abs(out.second - 1.0) <= z * out.second_se &&
               std::isfinite(out.fourth);
  return out;
}

}  // namespace bshrink
