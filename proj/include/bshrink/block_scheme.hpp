#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bshrink/errors.hpp"

namespace bshrink {

/// Half-open range [begin, end) of 0-based observation indices.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  [[nodiscard]] std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
  [[nodiscard]] bool empty() const noexcept { return size() == 0; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Contiguous frequency block {first, ..., first + length - 1}.
struct FrequencyBlock {
  std::size_t first = 0;
  std::size_t length = 0;
  [[nodiscard]] std::size_t last() const noexcept { return first + length - 1; }
  friend bool operator==(const FrequencyBlock&, const FrequencyBlock&) = default;
};

/// Deterministic block partition of the frequencies and sample-splitting groups
/// for a given n. With split divisor 1 every group and the tail alias the full
/// sample.
struct BlockScheme {
  std::size_t n = 0;
  std::size_t b = 0;        // floor(ln(n + 20))
  std::size_t c = 0;        // floor(ln b)
  std::size_t m = 0;        // floor(n / (divisor c)); n when not splitting
  std::size_t divisor = 1;  // 1, 7 or 21
  std::size_t K = 0;
  std::vector<std::size_t> lengths;     // L_1..L_K
  std::vector<FrequencyBlock> blocks;   // B_1..B_K

  [[nodiscard]] bool split() const noexcept { return divisor > 1; }
  [[nodiscard]] std::size_t coefficient_count() const noexcept {
    return blocks.empty() ? 0 : blocks.back().last() + 1;
  }
  /// Largest frequency used by the estimate.
  [[nodiscard]] std::size_t max_frequency() const noexcept { return coefficient_count() - 1; }

  /// Group M_s for s = 1, 2, ... (1-based).
  [[nodiscard]] IndexRange group(std::size_t s) const {
    if (s < 1) throw ValidationError("BlockScheme::group: groups are numbered from 1");
    if (!split()) return {0, n};
    if (s > divisor) throw ValidationError("BlockScheme::group: group " + std::to_string(s) + " beyond divisor");
    return {(s - 1) * m, s * m};
  }

  /// Observations after the first `groups` groups; the full sample when not splitting.
  [[nodiscard]] IndexRange tail(std::size_t groups) const {
    if (!split()) return {0, n};
    return {std::min(groups * m, n), n};
  }

  /// Block index (0-based) of frequency j, or K if j is beyond the last block.
  [[nodiscard]] std::size_t block_of(std::size_t j) const noexcept {
    for (std::size_t k = 0; k < blocks.size(); ++k)
      if (j <= blocks[k].last()) return k;
    return blocks.size();
  }
};

[[nodiscard]] inline BlockScheme build_scheme(std::size_t n, std::size_t split_divisor) {
  if (n < 1) throw ValidationError("build_scheme: n must be >= 1");
  if (split_divisor != 1 && split_divisor != 7 && split_divisor != 21) {
    throw ValidationError("build_scheme: split divisor must be 1, 7 or 21");
  }
  BlockScheme s;
  s.n = n;
  s.divisor = split_divisor;
  s.b = static_cast<std::size_t>(std::floor(std::log(static_cast<double>(n) + 20.0)));
  s.c = static_cast<std::size_t>(std::floor(std::log(static_cast<double>(s.b))));
  if (split_divisor == 1) {
    s.m = n;
  } else {
    s.m = n / (split_divisor * s.c);
    if (s.m <= 3) {
      throw ValidationError("build_scheme: n = " + std::to_string(n) + " too small for " +
                            std::to_string(split_divisor) + "-way splitting (m = " + std::to_string(s.m) + ")");
    }
  }

  const double budget = std::cbrt(static_cast<double>(n)) * static_cast<double>(s.c);
  const double growth = 1.0 + 1.0 / static_cast<double>(s.b);
  std::size_t total = 0;
  for (std::size_t k = 1;; ++k) {
    const std::size_t L =
        k <= s.b ? 1 : static_cast<std::size_t>(std::floor(std::pow(growth, static_cast<double>(k))));
    s.lengths.push_back(L);
    s.blocks.push_back({total, L});
    total += L;
    if (static_cast<double>(total) > budget && k > s.b) break;
  }
  s.K = s.lengths.size();
  // The loop stops at the first k > b that exceeds the budget; when the budget
  // was already exceeded within the unit blocks, K = b + 1.
  return s;
}

/// Largest ratio L_{k+1} / L_k among the geometric blocks k > b.
[[nodiscard]] inline double block_ratio_check(const BlockScheme& s) {
  if (s.K <= s.b) throw ValidationError("block_ratio_check: scheme has no geometric blocks");
  double worst = 1.0;
  for (std::size_t k = s.b + 1; k < s.K; ++k) {  // 1-based k, compare L_{k+1} with L_k
    const double r = static_cast<double>(s.lengths[k]) / static_cast<double>(s.lengths[k - 1]);
    worst = std::max(worst, r);
  }
  return worst;
}

inline void to_json(nlohmann::json& j, const BlockScheme& s) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : s.blocks) blocks.push_back({b.first, b.last()});
  j = nlohmann::json{{"n", s.n},       {"b_n", s.b},  {"c_n", s.c},         {"m", s.m},
                     {"divisor", s.divisor}, {"K_n", s.K}, {"L", s.lengths}, {"blocks", blocks}};
}

}  // namespace bshrink
