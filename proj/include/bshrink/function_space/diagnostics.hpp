#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/expansion.hpp"
#include "bshrink/function_space/grid_function.hpp"

namespace bshrink {

/// Finite-truncation values of the design and additive-component regularity
/// sums. No verdict is attached: the constants these sums are compared with in
/// theory have no numeric values.
struct DiagnosticSums {
  double density_abs_sum = 0.0;  // sum_{(j,s) in {0..T}^{1+D}} |pi_{js}|
  double density_tail = 0.0;     // sum_j sum_{|s|_inf > T} pi_{js}^2
  double additive_tail = 0.0;    // sum_{|s|_inf > T} g_s^2
  std::size_t threshold = 0;     // T
  std::size_t density_limit = 0; // largest frequency inspected for p
  std::size_t additive_limit = 0;
};

/// p lives on [0,1]^{1+D} (x first), g on [0,1]^D. Tails run up to the
/// largest frequency each grid resolves.
[[nodiscard]] inline DiagnosticSums assumption_diagnostics(const GridFunction& p, const GridFunction& g,
                                                           std::size_t threshold) {
  if (p.dimension() != g.dimension() + 1) {
    throw ValidationError("assumption_diagnostics: p must have one more dimension than g");
  }
  std::size_t p_limit = p.nodes(0) / 2 - 1;
  for (std::size_t t = 1; t < p.dimension(); ++t) p_limit = std::min(p_limit, p.nodes(t) / 2 - 1);
  std::size_t g_limit = g.nodes(0) / 2 - 1;
  for (std::size_t t = 1; t < g.dimension(); ++t) g_limit = std::min(g_limit, g.nodes(t) / 2 - 1);
  if (threshold > p_limit || threshold > g_limit) {
    throw ValidationError("assumption_diagnostics: truncation " + std::to_string(threshold) +
                          " exceeds grid resolution");
  }

  DiagnosticSums out;
  out.threshold = threshold;
  out.density_limit = p_limit;
  out.additive_limit = g_limit;

  const auto pc = fourier_coefficients(p, p_limit);
  pc.for_each_index([&](std::size_t flat, std::span<const std::size_t> idx) {
    const double c = pc.coefficients()[flat];
    bool in_box = true;
    std::size_t aux_linf = 0;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      if (idx[t] > threshold) in_box = false;
      if (t > 0) aux_linf = std::max(aux_linf, idx[t]);
    }
    if (in_box) out.density_abs_sum += std::abs(c);
    if (aux_linf > threshold) out.density_tail += c * c;
  });

  const auto gc = fourier_coefficients(g, g_limit);
  gc.for_each_index([&](std::size_t flat, std::span<const std::size_t> idx) {
    if (*std::max_element(idx.begin(), idx.end()) > threshold) {
      const double c = gc.coefficients()[flat];
      out.additive_tail += c * c;
    }
  });
  return out;
}

}  // namespace bshrink
