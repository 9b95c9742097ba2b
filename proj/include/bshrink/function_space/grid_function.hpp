#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/basis.hpp"

namespace bshrink {

/// A function on [0,1]^k stored by its values at the cell midpoints of a
/// uniform tensor grid. Integrals use the composite midpoint rule, which makes
/// the discrete cosine transform exactly orthonormal for frequencies below the
/// node count. Off-grid evaluation is multilinear with constant extension into
/// the half cells at the boundary, so it never leaves [min, max] of the values.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(std::vector<std::size_t> shape, std::vector<double> values)
      : shape_(std::move(shape)), values_(std::move(values)) {
    if (shape_.empty() || shape_.size() > kMaxDim) {
      throw ValidationError("GridFunction: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
    std::size_t total = 1;
    for (auto n : shape_) {
      if (n < 2) throw ValidationError("GridFunction: need at least 2 nodes per axis");
      total *= n;
    }
    if (values_.size() != total) {
      throw ValidationError("GridFunction: value count does not match grid shape");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw ValidationError("GridFunction: non-finite value");
    }
  }

  /// Midpoint coordinate of node i out of count on [0,1].
  [[nodiscard]] static double node(std::size_t i, std::size_t count) noexcept {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(count);
  }

  /// Samples fn(point) at every node; point has one coordinate per axis.
  template <class Fn>
  [[nodiscard]] static GridFunction sample(std::vector<std::size_t> shape, Fn&& fn) {
    std::size_t total = 1;
    for (auto n : shape) total *= n;
    std::vector<double> values(total);
    std::vector<std::size_t> idx(shape.size(), 0);
    std::array<double, kMaxDim> point{};
    const std::size_t k = shape.size();
    if (k == 0 || k > kMaxDim) throw ValidationError("GridFunction::sample: bad dimension");
    for (std::size_t flat = 0; flat < total; ++flat) {
      for (std::size_t t = 0; t < k; ++t) point[t] = node(idx[t], shape[t]);
      values[flat] = fn(std::span<const double>(point.data(), k));
      for (std::size_t t = k; t-- > 0;) {
        if (++idx[t] < shape[t]) break;
        idx[t] = 0;
      }
    }
    return GridFunction(std::move(shape), std::move(values));
  }

  template <class Fn>
  [[nodiscard]] static GridFunction sample_1d(std::size_t nodes, Fn&& fn) {
    return sample({nodes}, [&](std::span<const double> p) { return fn(p[0]); });
  }

  [[nodiscard]] static GridFunction constant(std::vector<std::size_t> shape, double value) {
    std::size_t total = 1;
    for (auto n : shape) total *= n;
    return GridFunction(std::move(shape), std::vector<double>(total, value));
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return shape_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t nodes(std::size_t axis) const { return shape_.at(axis); }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] bool same_shape(const GridFunction& other) const noexcept {
    return shape_ == other.shape_;
  }

  [[nodiscard]] double integral() const noexcept {
    if (values_.empty()) return 0.0;
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
  }

  [[nodiscard]] double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  [[nodiscard]] double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

  /// Multilinear interpolation; coordinates are clamped into [0,1].
  [[nodiscard]] double operator()(std::span<const double> point) const {
    const std::size_t k = shape_.size();
    if (point.size() != k) {
      throw ValidationError("GridFunction: point dimension " + std::to_string(point.size()) +
                            " != grid dimension " + std::to_string(k));
    }
    return interpolate(point.data());
  }

  [[nodiscard]] double at(double x) const {
    const double p[1] = {x};
    return (*this)(std::span<const double>(p, 1));
  }
  [[nodiscard]] double at(double x, double z) const {
    const double p[2] = {x, z};
    return (*this)(std::span<const double>(p, 2));
  }

  /// Interpolation without the dimension check; point must hold dimension() values.
  [[nodiscard]] double interpolate(const double* point) const noexcept {
    const std::size_t k = shape_.size();
    std::array<std::size_t, kMaxDim> lo{};
    std::array<double, kMaxDim> w{};
    std::array<std::size_t, kMaxDim> stride{};
    std::size_t s = 1;
    for (std::size_t t = k; t-- > 0;) {
      stride[t] = s;
      s *= shape_[t];
    }
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t n = shape_[t];
      const double u = std::clamp(point[t], 0.0, 1.0) * static_cast<double>(n) - 0.5;
      if (u <= 0.0) {
        lo[t] = 0;
        w[t] = 0.0;
      } else if (u >= static_cast<double>(n - 1)) {
        lo[t] = n - 2;
        w[t] = 1.0;
      } else {
        lo[t] = static_cast<std::size_t>(u);
        if (lo[t] > n - 2) lo[t] = n - 2;
        w[t] = u - static_cast<double>(lo[t]);
      }
    }
    double acc = 0.0;
    const std::size_t corners = std::size_t{1} << k;
    for (std::size_t c = 0; c < corners; ++c) {
      double weight = 1.0;
      std::size_t flat = 0;
      for (std::size_t t = 0; t < k; ++t) {
        const bool up = (c >> t) & 1U;
        weight *= up ? w[t] : 1.0 - w[t];
        flat += (lo[t] + (up ? 1 : 0)) * stride[t];
      }
      if (weight != 0.0) acc += weight * values_[flat];
    }
    return acc;
  }

  /// Integrates out every axis but the first, giving a function of x on the same x-nodes.
  [[nodiscard]] GridFunction integrate_trailing() const {
    if (shape_.size() == 1) return *this;
    const std::size_t nx = shape_[0];
    const std::size_t inner = values_.size() / nx;
    std::vector<double> out(nx);
    for (std::size_t a = 0; a < nx; ++a) {
      const double* row = values_.data() + a * inner;
      out[a] = std::accumulate(row, row + inner, 0.0) / static_cast<double>(inner);
    }
    return GridFunction({nx}, std::move(out));
  }

  /// Re-samples onto another grid of the same dimension by interpolation.
  [[nodiscard]] GridFunction resample(std::vector<std::size_t> shape) const {
    if (shape == shape_) return *this;
    if (shape.size() != shape_.size()) throw ValidationError("GridFunction::resample: dimension mismatch");
    return sample(std::move(shape), [&](std::span<const double> p) { return interpolate(p.data()); });
  }

  template <class Fn>
  [[nodiscard]] GridFunction map(Fn&& fn) const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), fn);
    return GridFunction(shape_, std::move(out));
  }

  template <class Fn>
  [[nodiscard]] GridFunction combine(const GridFunction& other, Fn&& fn) const {
    if (!same_shape(other)) throw ValidationError("GridFunction::combine: shape mismatch");
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(values_[i], other.values_[i]);
    return GridFunction(shape_, std::move(out));
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

/// Per-axis node counts used when a caller does not choose a resolution:
/// 512 in 1-D, 128 per axis in 2-D, 32 per axis beyond.
[[nodiscard]] inline std::vector<std::size_t> default_grid_shape(std::size_t dimension) {
  const std::size_t n = dimension == 1 ? 512 : dimension == 2 ? 128 : 32;
  return std::vector<std::size_t>(dimension, n);
}

}  // namespace bshrink
