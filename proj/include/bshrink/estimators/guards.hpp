#pragma once

#include <cstddef>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace bshrink {

/// Smallest value a denominator may take before its reciprocal is used.
inline constexpr double kDenominatorFloor = 1e-6;

/// Counts of floored denominators, keyed by the quantity that was floored.
struct GuardLog {
  std::map<std::string, std::size_t> events;

  /// Returns max(value, floor) and records an event when the floor was applied.
  double floor(const std::string& site, double value, double floor_value = kDenominatorFloor) {
    if (value < floor_value) {
      ++events[site];
      return floor_value;
    }
    return value;
  }

  [[nodiscard]] std::size_t total() const noexcept {
    std::size_t t = 0;
    for (const auto& [k, v] : events) t += v;
    return t;
  }

  void merge(const GuardLog& other) {
    for (const auto& [k, v] : other.events) events[k] += v;
  }

  friend bool operator==(const GuardLog&, const GuardLog&) = default;
};

inline void to_json(nlohmann::json& j, const GuardLog& g) { j = g.events; }

}  // namespace bshrink
