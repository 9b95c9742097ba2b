#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bshrink/block_scheme.hpp"
#include "bshrink/errors.hpp"
#include "bshrink/estimators/guards.hpp"
#include "bshrink/function_space/basis.hpp"
#include "bshrink/function_space/expansion.hpp"
#include "bshrink/function_space/fejer.hpp"
#include "bshrink/function_space/grid_function.hpp"
#include "bshrink/sim_models/sampling.hpp"

namespace bshrink {

/// Cosine basis values phi_0..phi_J at every covariate of a sample, plus the
/// projection and evaluation primitives the estimators are built from. All
/// sums over a group are normalized by the group size.
class Workspace {
 public:
  Workspace(const SampledDataset& data, std::size_t max_frequency, std::vector<std::size_t> grid_shape)
      : data_(data), J_(max_frequency), grid_(std::move(grid_shape)) {
    data.validate();
    if (grid_.empty()) grid_ = default_grid_shape(1 + data.aux_dim);
    if (grid_.size() != 1 + data.aux_dim) throw ValidationError("Workspace: grid must have 1 + D axes");
    const std::size_t n = data.size(), D = data.aux_dim, w = J_ + 1;
    xb_.resize(n * w);
    zb_.resize(n * D * w);
    for (std::size_t l = 0; l < n; ++l) {
      cos_basis_values(data.x[l], std::span<double>(xb_.data() + l * w, w));
      for (std::size_t t = 0; t < D; ++t) {
        cos_basis_values(data.z[l * D + t], std::span<double>(zb_.data() + (l * D + t) * w, w));
      }
    }
  }

  [[nodiscard]] const SampledDataset& data() const noexcept { return data_; }
  [[nodiscard]] std::size_t n() const noexcept { return data_.size(); }
  [[nodiscard]] std::size_t aux_dim() const noexcept { return data_.aux_dim; }
  [[nodiscard]] std::size_t max_frequency() const noexcept { return J_; }
  [[nodiscard]] const std::vector<std::size_t>& grid_shape() const noexcept { return grid_; }
  [[nodiscard]] double y(std::size_t l) const noexcept { return data_.y[l]; }

  [[nodiscard]] const double* x_basis(std::size_t l) const noexcept { return xb_.data() + l * (J_ + 1); }
  [[nodiscard]] const double* z_basis(std::size_t l, std::size_t t) const noexcept {
    return zb_.data() + (l * aux_dim() + t) * (J_ + 1);
  }
  [[nodiscard]] double phi(std::size_t j, std::size_t l) const noexcept { return x_basis(l)[j]; }

  /// Coefficients over {0..B}^{1+D} of |r|^{-1} sum_{l in r} w(l) phi_i(X_l) psi_s(Z_l).
  template <class W>
  [[nodiscard]] CoefficientExpansion joint_projection(IndexRange r, std::size_t B, W&& w) const {
    require(B);
    const std::size_t k = 1 + aux_dim(), side = B + 1;
    CoefficientExpansion out(std::vector<std::size_t>(k, B));
    auto coeffs = out.coefficients();
    std::vector<double> outer(out.size()), next(out.size());
    for (std::size_t l = r.begin; l < r.end; ++l) {
      const double wl = w(l);
      if (wl == 0.0) continue;
      std::size_t len = side;
      const double* xb = x_basis(l);
      for (std::size_t i = 0; i < side; ++i) outer[i] = wl * xb[i];
      for (std::size_t t = 0; t < aux_dim(); ++t) {
        const double* zb = z_basis(l, t);
        for (std::size_t a = 0; a < len; ++a)
          for (std::size_t s = 0; s < side; ++s) next[a * side + s] = outer[a] * zb[s];
        len *= side;
        std::swap(outer, next);
      }
      for (std::size_t i = 0; i < len; ++i) coeffs[i] += outer[i];
    }
    scale(coeffs, r);
    return out;
  }

  /// Coefficients a_0..a_B of |r|^{-1} sum_{l in r} w(l) phi_i(X_l).
  template <class W>
  [[nodiscard]] std::vector<double> x_projection(IndexRange r, std::size_t B, W&& w) const {
    require(B);
    std::vector<double> a(B + 1, 0.0);
    for (std::size_t l = r.begin; l < r.end; ++l) {
      const double wl = w(l);
      const double* xb = x_basis(l);
      for (std::size_t i = 0; i <= B; ++i) a[i] += wl * xb[i];
    }
    scale(a, r);
    return a;
  }

  /// Coefficients over {0..B}^D of |r|^{-1} sum_{l in r} w(l) psi_s(Z_l), or of
  /// w(l) psi_s(Z_l)^2 when `squared` is set.
  template <class W>
  [[nodiscard]] CoefficientExpansion z_projection(IndexRange r, std::size_t B, W&& w, bool squared = false) const {
    require(B);
    const std::size_t D = aux_dim(), side = B + 1;
    CoefficientExpansion out(std::vector<std::size_t>(D, B));
    auto coeffs = out.coefficients();
    std::vector<double> outer(out.size()), next(out.size());
    for (std::size_t l = r.begin; l < r.end; ++l) {
      outer[0] = w(l);
      std::size_t len = 1;
      for (std::size_t t = 0; t < D; ++t) {
        const double* zb = z_basis(l, t);
        for (std::size_t a = 0; a < len; ++a)
          for (std::size_t s = 0; s < side; ++s) next[a * side + s] = outer[a] * (squared ? zb[s] * zb[s] : zb[s]);
        len *= side;
        std::swap(outer, next);
      }
      for (std::size_t i = 0; i < len; ++i) coeffs[i] += outer[i];
    }
    scale(coeffs, r);
    return out;
  }

  /// Value at (X_l, Z_l) of an expansion on [0,1]^{1+D}.
  [[nodiscard]] double eval_joint(const CoefficientExpansion& e, std::size_t l) const {
    std::array<std::span<const double>, kMaxDim> t{};
    t[0] = std::span<const double>(x_basis(l), J_ + 1);
    for (std::size_t a = 0; a < aux_dim(); ++a) t[a + 1] = std::span<const double>(z_basis(l, a), J_ + 1);
    return e.evaluate_tables(std::span<const std::span<const double>>(t.data(), 1 + aux_dim()));
  }

  /// Value at Z_l of an expansion on [0,1]^D.
  [[nodiscard]] double eval_z(const CoefficientExpansion& e, std::size_t l) const {
    std::array<std::span<const double>, kMaxDim> t{};
    for (std::size_t a = 0; a < aux_dim(); ++a) t[a] = std::span<const double>(z_basis(l, a), J_ + 1);
    return e.evaluate_tables(std::span<const std::span<const double>>(t.data(), aux_dim()));
  }

  /// sum_i a_i phi_i(X_l).
  [[nodiscard]] double eval_x(std::span<const double> a, std::size_t l) const noexcept {
    const double* xb = x_basis(l);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * xb[i];
    return acc;
  }

  /// Value of a grid function on [0,1]^{1+D} at (X_l, Z_l).
  [[nodiscard]] double at_point(const GridFunction& f, std::size_t l) const noexcept {
    double pt[kMaxDim];
    pt[0] = data_.x[l];
    for (std::size_t t = 0; t < aux_dim(); ++t) pt[t + 1] = data_.z[l * aux_dim() + t];
    return f.interpolate(pt);
  }

 private:
  void require(std::size_t B) const {
    if (B > J_) {
      throw ValidationError("Workspace: frequency " + std::to_string(B) + " beyond cached basis (" +
                            std::to_string(J_) + ")");
    }
  }
  template <class V>
  static void scale(V& v, IndexRange r) {
    if (r.empty()) throw GuardError("empty sample group");
    const double inv = 1.0 / static_cast<double>(r.size());
    for (auto& c : v) c *= inv;
  }

  const SampledDataset& data_;
  std::size_t J_;
  std::vector<std::size_t> grid_;
  std::vector<double> xb_;
  std::vector<double> zb_;
};

/// Joint design density known or estimated: values at the sample points and on a grid.
struct DensityView {
  std::vector<double> points;  // p(X_l, Z_l) for every l
  GridFunction grid;           // on [0,1]^{1+D}
};

[[nodiscard]] inline DensityView known_density(const Workspace& ws, const GridFunction& p) {
  DensityView v;
  v.points.resize(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) v.points[l] = ws.at_point(p, l);
  v.grid = p;
  return v;
}

/// Truncated projection density estimate max(floor, m^{-1} sum_{l in r} sum_{(i,s) in {0..N}^{1+D}}
/// phi_i(X_l) psi_s(Z_l) phi_i(x) psi_s(z)).
[[nodiscard]] inline DensityView projection_density(const Workspace& ws, IndexRange r, std::size_t N, double floor) {
  const auto c = ws.joint_projection(r, N, [](std::size_t) { return 1.0; });
  DensityView v;
  v.points.resize(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) v.points[l] = std::max(floor, ws.eval_joint(c, l));
  v.grid = c.on_grid(ws.grid_shape()).map([floor](double x) { return std::max(floor, x); });
  return v;
}

/// Truncated projection estimate of q = f + g over ||(i,s)||_inf < b with
/// weights Y / p, clamped to [-b, b]; returned as values at every sample point.
[[nodiscard]] inline std::vector<double> regression_surface(const Workspace& ws, IndexRange r, std::size_t b,
                                                            const DensityView& p, GuardLog& guards) {
  const auto c = ws.joint_projection(r, b - 1, [&](std::size_t l) {
    return ws.y(l) / guards.floor("density", p.points[l]);
  });
  const double lim = static_cast<double>(b);
  std::vector<double> q(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) q[l] = std::clamp(ws.eval_joint(c, l), -lim, lim);
  return q;
}

/// Projection estimate of sigma^2 over ||(i,s)||_inf < b from squared residuals
/// (Y - q)^2 / p, clamped to [c_lower, c_upper] on the working grid.
[[nodiscard]] inline GridFunction scale_surface(const Workspace& ws, IndexRange r, std::size_t b,
                                                const std::vector<double>& q, const DensityView& p, double c_lower,
                                                double c_upper, GuardLog& guards) {
  const auto c = ws.joint_projection(r, b - 1, [&](std::size_t l) {
    const double e = ws.y(l) - q[l];
    return e * e / guards.floor("density", p.points[l]);
  });
  return c.on_grid(ws.grid_shape()).map([=](double v) { return std::clamp(v, c_lower, c_upper); });
}

/// I(x) = int p(x,z) w(x,z) dz as a function of x on the grid of p.
[[nodiscard]] inline GridFunction conditional_information(const GridFunction& p, const GridFunction& w) {
  const GridFunction wr = w.same_shape(p) ? w : w.resample(p.shape());
  return p.combine(wr, [](double a, double b) { return a * b; }).integrate_trailing();
}

/// int_0^1 dx / int p(x,z) sigma^{-2}(x,z) dz for a clamped scale estimate.
[[nodiscard]] inline double difficulty_from_surfaces(const GridFunction& p, const GridFunction& sigma2,
                                                     GuardLog& guards) {
  const auto inv = sigma2.map([](double v) { return 1.0 / v; });
  const auto info = conditional_information(p, inv);
  double acc = 0.0;
  for (double v : info.values()) acc += 1.0 / guards.floor("difficulty_information", v);
  return acc / static_cast<double>(info.size());
}

/// Fejer approximation of order b of 1/sigma2, as an expansion with ||(i,s)||_inf < b.
[[nodiscard]] inline CoefficientExpansion fejer_inverse_scale(const GridFunction& sigma2, std::size_t b) {
  return fejer_coefficients(sigma2.map([](double v) { return 1.0 / v; }), b);
}

/// Values of a 1-D function of x at every sample point, floored for use as a denominator.
[[nodiscard]] inline std::vector<double> information_at_points(const Workspace& ws, const GridFunction& info,
                                                               GuardLog& guards) {
  std::vector<double> out(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) {
    const double x = ws.data().x[l];
    out[l] = guards.floor("information", info.interpolate(&x));
  }
  return out;
}

/// Projection series estimate of f_{-j}: sum_{i <= N, i != j} a_i phi_i(x).
struct LeaveOneOutSeries {
  std::vector<double> a;     // a_0..a_N
  std::vector<double> full;  // sum_{i <= N} a_i phi_i(X_l) at every sample point

  [[nodiscard]] double at(const Workspace& ws, std::size_t j, std::size_t l) const noexcept {
    return full[l] - (j < a.size() ? a[j] * ws.phi(j, l) : 0.0);
  }
};

template <class W>
[[nodiscard]] inline LeaveOneOutSeries leave_one_out_series(const Workspace& ws, IndexRange r, std::size_t N, W&& w) {
  LeaveOneOutSeries s;
  s.a = ws.x_projection(r, N, std::forward<W>(w));
  s.full.resize(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) s.full[l] = ws.eval_x(s.a, l);
  return s;
}

/// Projection series estimate of g over {0..N}^D without the constant term,
/// evaluated at every sample point. With `shrink`, each coefficient c_s is
/// multiplied by max(0, 1 - v_s / c_s^2), where v_s is the sample variance of
/// its summands divided by the group size.
template <class W>
[[nodiscard]] inline std::vector<double> additive_estimate(const Workspace& ws, IndexRange r, std::size_t N, W&& w,
                                                           bool shrink = false) {
  auto c = ws.z_projection(r, N, w);
  auto coeffs = c.coefficients();
  coeffs[0] = 0.0;
  if (shrink && r.size() > 1) {
    const auto second = ws.z_projection(r, N, [&](std::size_t l) { return w(l) * w(l); }, true);
    const double m = static_cast<double>(r.size());
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
      const double ci = coeffs[i];
      const double v = std::max(second.coefficients()[i] - ci * ci, 0.0) / (m - 1.0);
      coeffs[i] = ci * ci > v ? ci * (1.0 - v / (ci * ci)) : 0.0;
    }
  }
  std::vector<double> out(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) out[l] = ws.eval_z(c, l);
  return out;
}

}  // namespace bshrink
