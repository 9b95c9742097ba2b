#pragma once

#include <cstddef>
#include <span>

#include "bshrink/errors.hpp"

namespace bshrink {

/// sum_{l1 < l2} a[l1] b[l2], computed exactly with a running prefix sum.
[[nodiscard]] inline double ordered_pair_sum(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("ordered_pair_sum: length mismatch");
  double prefix = 0.0, total = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    total += prefix * b[l];
    prefix += a[l];
  }
  return total;
}

/// 2 / (m (m - 1)) sum_{l1 < l2} a[l1] b[l2]; the U-statistic for E{a} E{b}
/// when the pairs are independent.
[[nodiscard]] inline double pair_mean(std::span<const double> a, std::span<const double> b) {
  const std::size_t m = a.size();
  if (m < 2) throw GuardError("pair U-statistic needs at least 2 observations");
  return 2.0 * ordered_pair_sum(a, b) / (static_cast<double>(m) * static_cast<double>(m - 1));
}

}  // namespace bshrink
