#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/basis.hpp"
#include "bshrink/function_space/grid_function.hpp"

namespace bshrink {

/// Coefficients of a (tensor-product) cosine series over the index box
/// {0..bounds[0]} x ... x {0..bounds[k-1]}; entries outside any narrower
/// index set the caller has in mind are simply zero.
class CoefficientExpansion {
 public:
  CoefficientExpansion() = default;

  explicit CoefficientExpansion(std::vector<std::size_t> bounds)
      : bounds_(std::move(bounds)), coeffs_(box_size(bounds_), 0.0) {}

  CoefficientExpansion(std::vector<std::size_t> bounds, std::vector<double> coeffs)
      : bounds_(std::move(bounds)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != box_size(bounds_)) {
      throw ValidationError("CoefficientExpansion: coefficient count does not match bounds");
    }
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return bounds_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& bounds() const noexcept { return bounds_; }
  [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] std::span<double> coefficients() noexcept { return coeffs_; }

  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != bounds_.size()) throw ValidationError("CoefficientExpansion: index dimension mismatch");
    std::size_t flat = 0;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      if (idx[t] > bounds_[t]) throw ValidationError("CoefficientExpansion: index outside truncation bounds");
      flat = flat * (bounds_[t] + 1) + idx[t];
    }
    return flat;
  }

  [[nodiscard]] double at(std::span<const std::size_t> idx) const { return coeffs_[flat_index(idx)]; }
  [[nodiscard]] double at(const TensorIndex& idx) const { return at(std::span<const std::size_t>(idx.s)); }
  double& operator[](std::span<const std::size_t> idx) { return coeffs_[flat_index(idx)]; }

  /// Calls fn(flat, index) for every multi-index in row-major order.
  template <class Fn>
  void for_each_index(Fn&& fn) const {
    const std::size_t k = bounds_.size();
    std::array<std::size_t, kMaxDim> idx{};
    for (std::size_t flat = 0; flat < coeffs_.size(); ++flat) {
      fn(flat, std::span<const std::size_t>(idx.data(), k));
      for (std::size_t t = k; t-- > 0;) {
        if (++idx[t] <= bounds_[t]) break;
        idx[t] = 0;
      }
    }
  }

  /// Evaluates the finite series at a point of [0,1]^k.
  [[nodiscard]] double evaluate(std::span<const double> point) const {
    if (point.size() != dimension()) throw ValidationError("CoefficientExpansion: point dimension mismatch");
    for (double v : point) detail::require_unit_interval(v);
    std::array<std::vector<double>, kMaxDim> tables;
    for (std::size_t t = 0; t < dimension(); ++t) {
      tables[t].resize(bounds_[t] + 1);
      cos_basis_values(point[t], tables[t]);
    }
    std::array<std::span<const double>, kMaxDim> views;
    for (std::size_t t = 0; t < dimension(); ++t) views[t] = tables[t];
    return evaluate_tables(std::span<const std::span<const double>>(views.data(), dimension()));
  }

  /// Evaluates given per-axis basis tables; tables[t] must hold at least bounds[t]+1 values.
  [[nodiscard]] double evaluate_tables(std::span<const std::span<const double>> tables) const noexcept {
    const std::size_t k = bounds_.size();
    if (k == 1) {
      double acc = 0.0;
      for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += coeffs_[i] * tables[0][i];
      return acc;
    }
    if (k == 2) {
      const std::size_t nr = bounds_[1] + 1;
      double acc = 0.0;
      for (std::size_t i = 0; i <= bounds_[0]; ++i) {
        const double* row = coeffs_.data() + i * nr;
        double inner = 0.0;
        for (std::size_t r = 0; r < nr; ++r) inner += row[r] * tables[1][r];
        acc += inner * tables[0][i];
      }
      return acc;
    }
    double acc = 0.0;
    for_each_index([&](std::size_t flat, std::span<const std::size_t> idx) {
      double term = coeffs_[flat];
      if (term == 0.0) return;
      for (std::size_t t = 0; t < k; ++t) term *= tables[t][idx[t]];
      acc += term;
    });
    return acc;
  }

  [[nodiscard]] GridFunction on_grid(std::vector<std::size_t> shape) const;

  [[nodiscard]] double sum_squares() const noexcept {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return s;
  }

 private:
  static std::size_t box_size(const std::vector<std::size_t>& bounds) {
    if (bounds.empty() || bounds.size() > kMaxDim) {
      throw ValidationError("CoefficientExpansion: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
    std::size_t n = 1;
    for (auto b : bounds) n *= b + 1;
    return n;
  }

  std::vector<std::size_t> bounds_;
  std::vector<double> coeffs_;
};

namespace detail {

/// Contracts one axis of a row-major array with a (rows x shape[axis]) matrix.
inline std::vector<double> contract_axis(const std::vector<double>& in, std::vector<std::size_t>& shape,
                                         std::size_t axis, const std::vector<double>& matrix,
                                         std::size_t rows) {
  std::size_t outer = 1;
  for (std::size_t t = 0; t < axis; ++t) outer *= shape[t];
  const std::size_t len = shape[axis];
  std::size_t inner = 1;
  for (std::size_t t = axis + 1; t < shape.size(); ++t) inner *= shape[t];
  std::vector<double> out(outer * rows * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < rows; ++r) {
      double* dst = out.data() + (o * rows + r) * inner;
      for (std::size_t i = 0; i < len; ++i) {
        const double w = matrix[r * len + i];
        if (w == 0.0) continue;
        const double* src = in.data() + (o * len + i) * inner;
        for (std::size_t q = 0; q < inner; ++q) dst[q] += w * src[q];
      }
    }
  }
  shape[axis] = rows;
  return out;
}

/// basis[k * nodes + i] = phi_k(node_i) * scale
inline std::vector<double> basis_matrix(std::size_t frequencies, std::size_t nodes, double scale) {
  std::vector<double> m(frequencies * nodes);
  for (std::size_t k = 0; k < frequencies; ++k) {
    for (std::size_t i = 0; i < nodes; ++i) {
      m[k * nodes + i] = scale * cos_basis(k, GridFunction::node(i, nodes));
    }
  }
  return m;
}

inline std::vector<double> transpose(const std::vector<double>& m, std::size_t rows, std::size_t cols) {
  std::vector<double> t(m.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = m[r * cols + c];
  return t;
}

}  // namespace detail

inline GridFunction CoefficientExpansion::on_grid(std::vector<std::size_t> shape) const {
  if (shape.size() != dimension()) throw ValidationError("CoefficientExpansion::on_grid: dimension mismatch");
  std::vector<std::size_t> cur(bounds_.size());
  for (std::size_t t = 0; t < cur.size(); ++t) cur[t] = bounds_[t] + 1;
  std::vector<double> data = coeffs_;
  for (std::size_t t = 0; t < shape.size(); ++t) {
    const auto forward = detail::basis_matrix(cur[t], shape[t], 1.0);
    data = detail::contract_axis(data, cur, t, detail::transpose(forward, cur[t], shape[t]), shape[t]);
  }
  return GridFunction(std::move(shape), std::move(data));
}

/// Midpoint-rule Fourier coefficients of fn for every index in the box
/// {0..max_index[0]} x ...; each frequency must stay below half the node count
/// of its axis.
[[nodiscard]] inline CoefficientExpansion fourier_coefficients(const GridFunction& fn,
                                                               const std::vector<std::size_t>& max_index) {
  if (max_index.size() != fn.dimension()) {
    throw ValidationError("fourier_coefficients: truncation has dimension " + std::to_string(max_index.size()) +
                          ", function has " + std::to_string(fn.dimension()));
  }
  for (std::size_t t = 0; t < max_index.size(); ++t) {
    if (2 * max_index[t] >= fn.nodes(t)) {
      throw ValidationError("fourier_coefficients: frequency " + std::to_string(max_index[t]) +
                            " exceeds grid resolution (" + std::to_string(fn.nodes(t)) + " nodes)");
    }
  }
  std::vector<std::size_t> shape = fn.shape();
  std::vector<double> data(fn.values().begin(), fn.values().end());
  for (std::size_t t = 0; t < shape.size(); ++t) {
    const std::size_t nodes = shape[t];
    const auto m = detail::basis_matrix(max_index[t] + 1, nodes, 1.0 / static_cast<double>(nodes));
    data = detail::contract_axis(data, shape, t, m, max_index[t] + 1);
  }
  return CoefficientExpansion(max_index, std::move(data));
}

/// Convenience overload with the same bound on every axis.
[[nodiscard]] inline CoefficientExpansion fourier_coefficients(const GridFunction& fn, std::size_t max_index) {
  return fourier_coefficients(fn, std::vector<std::size_t>(fn.dimension(), max_index));
}

}  // namespace bshrink
