#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bshrink {

/// Largest auxiliary dimension D supported by the fixed-size point buffers.
inline constexpr std::size_t kMaxAuxDim = 3;
/// Largest total dimension 1 + D of a joint (x, z) function.
inline constexpr std::size_t kMaxDim = kMaxAuxDim + 1;

/// One frequency per auxiliary coordinate of the tensor-product cosine basis.
struct TensorIndex {
  std::vector<std::size_t> s;

  [[nodiscard]] std::size_t dimension() const noexcept { return s.size(); }
  [[nodiscard]] std::size_t linf() const noexcept {
    return s.empty() ? 0 : *std::max_element(s.begin(), s.end());
  }
};

namespace detail {

inline void require_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("cosine basis argument " + std::to_string(x) + " outside [0,1]");
  }
}

}  // namespace detail

/// phi_0(x) = 1, phi_j(x) = sqrt(2) cos(pi j x) on [0,1].
[[nodiscard]] inline double cos_basis(std::size_t j, double x) {
  detail::require_unit_interval(x);
  if (j == 0) return 1.0;
  return std::numbers::sqrt2 * std::cos(std::numbers::pi * static_cast<double>(j) * x);
}

/// Writes phi_0(x), ..., phi_{out.size()-1}(x) via the Chebyshev recurrence.
/// No domain check; callers on hot paths validate their inputs once.
inline void cos_basis_values(double x, std::span<double> out) noexcept {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  const double c1 = std::cos(std::numbers::pi * x);
  double prev = 1.0;
  double cur = c1;
  out[1] = std::numbers::sqrt2 * cur;
  for (std::size_t j = 2; j < out.size(); ++j) {
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
    out[j] = std::numbers::sqrt2 * cur;
  }
}

/// psi_s(z) = prod_t phi_{s_t}(z_t).
[[nodiscard]] inline double tensor_basis(const TensorIndex& index, std::span<const double> z) {
  if (index.dimension() != z.size()) {
    throw std::invalid_argument("tensor_basis: index has dimension " +
                                std::to_string(index.dimension()) + " but point has " +
                                std::to_string(z.size()));
  }
  double v = 1.0;
  for (std::size_t t = 0; t < z.size(); ++t) v *= cos_basis(index.s[t], z[t]);
  return v;
}

}  // namespace bshrink
