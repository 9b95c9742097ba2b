#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/expansion.hpp"
#include "bshrink/function_space/grid_function.hpp"

namespace bshrink {

/// Coefficients of the order-`order` Fejer (Cesaro) mean of the square
/// partial sums of fn:
///   order^{-1} sum_{t<order} sum_{|kappa|_inf <= t} c_kappa basis_kappa
///     = sum_{|kappa|_inf < order} (1 - |kappa|_inf / order) c_kappa basis_kappa.
/// In one dimension the kernel is nonnegative and the mean stays inside the
/// range of fn; in several dimensions the square-sum kernel has small negative
/// lobes, so the range is kept only approximately.
[[nodiscard]] inline CoefficientExpansion fejer_coefficients(const GridFunction& fn, std::size_t order) {
  if (order < 1) throw ValidationError("fejer_approximation: order must be >= 1");
  for (std::size_t t = 0; t < fn.dimension(); ++t) {
    if (2 * (order - 1) >= fn.nodes(t)) {
      throw ValidationError("fejer_approximation: order " + std::to_string(order) +
                            " exceeds grid resolution (" + std::to_string(fn.nodes(t)) + " nodes)");
    }
  }
  CoefficientExpansion coeffs = fourier_coefficients(fn, order - 1);
  auto values = coeffs.coefficients();
  const double b = static_cast<double>(order);
  coeffs.for_each_index([&](std::size_t flat, std::span<const std::size_t> idx) {
    const std::size_t linf = *std::max_element(idx.begin(), idx.end());
    values[flat] *= 1.0 - static_cast<double>(linf) / b;
  });
  return coeffs;
}

/// Fejer approximation of fn evaluated back on fn's own grid.
[[nodiscard]] inline GridFunction fejer_approximation(const GridFunction& fn, std::size_t order) {
  return fejer_coefficients(fn, order).on_grid(fn.shape());
}

}  // namespace bshrink
