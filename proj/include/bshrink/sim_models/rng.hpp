#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace bshrink {

using Rng = std::mt19937_64;

/// Derives a 64-bit seed from a master seed and a stream path by feeding the
/// 32-bit halves of (master, path...) through std::seed_seq. Replication r of
/// experiment cell c uses derive_seed(master, {c, r}).
[[nodiscard]] inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (path.size() + 1));
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  for (auto p : path) push(p);
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

[[nodiscard]] inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace bshrink
