#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bshrink/block_scheme.hpp"
#include "bshrink/errors.hpp"
#include "bshrink/estimators/guards.hpp"
#include "bshrink/estimators/series_estimate.hpp"
#include "bshrink/estimators/ustat.hpp"
#include "bshrink/estimators/workspace.hpp"
#include "bshrink/function_space/expansion.hpp"
#include "bshrink/sim_models/difficulty.hpp"
#include "bshrink/sim_models/model.hpp"
#include "bshrink/sim_models/sampling.hpp"

namespace bshrink {

enum class Setting { oracle, s1, s2, s3, s4_analytic, s5_sobolev, no_split_D, no_split_S, e_baseline };

[[nodiscard]] inline std::string to_string(Setting s) {
  switch (s) {
    case Setting::oracle: return "oracle";
    case Setting::s1: return "s1";
    case Setting::s2: return "s2";
    case Setting::s3: return "s3";
    case Setting::s4_analytic: return "s4_analytic";
    case Setting::s5_sobolev: return "s5_sobolev";
    case Setting::no_split_D: return "no_split_D";
    case Setting::no_split_S: return "no_split_S";
    case Setting::e_baseline: return "e_baseline";
  }
  return "unknown";
}

[[nodiscard]] inline Setting parse_setting(const std::string& s) {
  for (auto v : {Setting::oracle, Setting::s1, Setting::s2, Setting::s3, Setting::s4_analytic, Setting::s5_sobolev,
                 Setting::no_split_D, Setting::no_split_S, Setting::e_baseline}) {
    if (to_string(v) == s) return v;
  }
  throw ValidationError("unknown estimator tag '" + s + "'");
}

/// Split divisor a setting uses with sample splitting on or off.
[[nodiscard]] inline std::size_t split_divisor(Setting s, bool split) {
  switch (s) {
    case Setting::oracle:
    case Setting::s1:
    case Setting::s2:
    case Setting::s3: return split ? 7 : 1;
    case Setting::s4_analytic:
    case Setting::s5_sobolev: return split ? 21 : 1;
    case Setting::no_split_D:
    case Setting::no_split_S:
    case Setting::e_baseline: return 1;
  }
  return 1;
}

/// How block energies Theta_k are estimated: the pairwise U-statistic of
/// Y phi_j / p, or the plug-in mean of theta_hat_j^2 - d_hat / n over the block.
enum class BlockEnergy { u_statistic, plug_in };

[[nodiscard]] inline std::string to_string(BlockEnergy e) {
  return e == BlockEnergy::u_statistic ? "u_statistic" : "plug_in";
}

[[nodiscard]] inline BlockEnergy parse_block_energy(const std::string& s) {
  if (s == "u_statistic") return BlockEnergy::u_statistic;
  if (s == "plug_in") return BlockEnergy::plug_in;
  throw ValidationError("unknown block energy '" + s + "' (expected u_statistic or plug_in)");
}

struct EstimatorOptions {
  double c_lower = 0.0;  // c_*: lower bound of sigma^2
  double c_upper = 0.0;  // c^*: upper bound of sigma^2
  bool marginal_block_energy = false;  // setting 1: (Y - g) phi / p(X) in the U-statistic
  bool project_d_hat = false;          // clamp d_hat into [(C2 b)^{-1/4}, (C2 b)^{1/4}]
  double C2 = 1.0;
  bool e_known_design = true;          // E-baseline: known marginal design density or a projection estimate
  std::vector<std::size_t> grid_shape; // working grid; empty selects the default
  double density_floor = 0.0;          // lower clamp of projection densities; 0 selects 1/(c+1)
  BlockEnergy block_energy = BlockEnergy::plug_in;
  bool shrink_additive = true;         // positive-part shrinkage of the additive-component coefficients
};

/// Nuisance functions handed to an estimator. Which ones must be present depends on the setting.
struct KnownNuisances {
  std::optional<GridFunction> g;       // on [0,1]^D
  std::optional<GridFunction> sigma;   // on [0,1]^{1+D}
  std::optional<GridFunction> design;  // on [0,1]^{1+D}
  std::optional<double> d;
  std::vector<double> theta;           // true Fourier coefficients of f (oracle only)
};

struct EstimatorInputs {
  const SampledDataset* data = nullptr;
  BlockScheme scheme;
  Setting setting = Setting::no_split_S;
  KnownNuisances known;
  EstimatorOptions options;

  void validate() const {
    const bool needs_data = !(setting == Setting::oracle && data == nullptr);
    if (needs_data) {
      if (data == nullptr) throw ValidationError("estimator '" + to_string(setting) + "' needs a dataset");
      if (data->size() != scheme.n) throw ValidationError("block scheme built for a different sample size");
    }
    const std::size_t div = scheme.divisor;
    if (div != split_divisor(setting, true) && div != split_divisor(setting, false)) {
      throw ValidationError("estimator '" + to_string(setting) + "' cannot use split divisor " + std::to_string(div));
    }
    auto need = [&](bool ok, const char* what) {
      if (!ok) throw ValidationError("estimator '" + to_string(setting) + "' needs " + what);
    };
    switch (setting) {
      case Setting::oracle:
        need(known.d.has_value(), "the coefficient of difficulty");
        need(known.theta.size() >= scheme.coefficient_count(), "true coefficients");
        if (data) need(known.g && known.sigma && known.design, "g, sigma and p");
        break;
      case Setting::s1:
      case Setting::no_split_D:
        need(known.g && known.sigma && known.design && known.d, "g, sigma, p and d");
        break;
      case Setting::s2: need(known.sigma && known.design && known.d, "sigma, p and d"); break;
      case Setting::s3:
        need(known.design.has_value(), "p");
        need(options.c_lower > 0.0 && options.c_lower < options.c_upper, "0 < c_* < c^*");
        break;
      case Setting::s4_analytic:
      case Setting::s5_sobolev:
      case Setting::no_split_S:
        need(options.c_lower > 0.0 && options.c_lower < options.c_upper, "0 < c_* < c^*");
        break;
      case Setting::e_baseline:
        if (options.e_known_design) need(known.design.has_value(), "p (or e_known_design = false)");
        break;
    }
    if (needs_data && (known.g && known.g->dimension() != data->aux_dim)) {
      throw ValidationError("known g has the wrong dimension");
    }
  }
};

/// floor(v) with a 1e-9 slack so exact integer roots are not lost to rounding.
[[nodiscard]] inline std::size_t floor_root(double v) { return static_cast<std::size_t>(std::floor(v + 1e-9)); }

/// Frequency cutoffs of the nuisance estimates.
struct Cutoffs {
  std::size_t b = 0;
  std::size_t regression = 0;  // N_{-j} = {0..regression} \ {j}
  std::size_t additive = 1;    // N_g
  std::size_t density = 0;     // N_p
  std::size_t density_refined = 0;  // N_p^*
};

/// `sobolev` selects the Sobolev-design cutoffs of the fully data-driven
/// settings; `fully_adaptive` distinguishes them from the known-design settings.
[[nodiscard]] inline Cutoffs make_cutoffs(const BlockScheme& s, std::size_t D, bool fully_adaptive, bool sobolev) {
  Cutoffs c;
  c.b = s.b;
  const double n = static_cast<double>(s.n), b = static_cast<double>(s.b), Dd = static_cast<double>(D);
  if (!fully_adaptive) {
    c.regression = s.b;
    c.additive = std::max<std::size_t>(1, floor_root(std::pow(n, 1.0 / Dd) / std::pow(b, 2.0 / Dd)));
    return c;
  }
  if (!sobolev) {
    c.regression = s.b;
    c.additive = std::max<std::size_t>(1, floor_root(std::pow(n, 1.0 / Dd) / std::pow(b, 2.0 * Dd)));
    c.density = s.b * s.c;
    c.density_refined = c.density;
  } else {
    c.regression = floor_root(std::cbrt(n));
    c.additive = std::max<std::size_t>(1, floor_root(std::pow(n, 1.0 / (3.0 * Dd))));
    c.density = floor_root(std::pow(n, 1.0 / (3.0 * (Dd + 1.0))));
    c.density_refined = floor_root(std::pow(n, 1.0 / (2.0 * (Dd + 2.0))));
  }
  return c;
}

/// The three statistics fed to the blockwise-shrinkage assembly.
struct ShrinkageStatistics {
  std::vector<double> theta_hat;
  std::vector<double> block_energy;
  double d_hat = 0.0;
  GuardLog guards;
};

namespace detail {

[[nodiscard]] inline std::size_t workspace_frequency(const BlockScheme& s, const Cutoffs& c) {
  return std::max({s.max_frequency(), c.b, c.regression, c.additive, c.density, c.density_refined});
}

[[nodiscard]] inline std::vector<double> known_additive_at_points(const Workspace& ws, const GridFunction& g) {
  std::vector<double> out(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) out[l] = g.interpolate(ws.data().z_row(l));
  return out;
}

/// theta_hat_j = |tail|^{-1} sum_{l in tail} [Y_l - f_{-j}(X_l) - g_l] w_l phi_j(X_l) / I_l.
[[nodiscard]] inline std::vector<double> coefficient_statistics(const Workspace& ws, const BlockScheme& s,
                                                                IndexRange tail, const LeaveOneOutSeries& fminus,
                                                                const std::vector<double>& g,
                                                                const std::vector<double>& w,
                                                                const std::vector<double>& info) {
  if (tail.empty()) throw GuardError("no observations left for the Fourier coefficient statistics");
  std::vector<double> theta(s.coefficient_count(), 0.0);
  std::vector<double> base(ws.n());
  for (std::size_t l = tail.begin; l < tail.end; ++l) base[l] = w[l] / info[l];
  for (std::size_t j = 0; j < theta.size(); ++j) {
    double acc = 0.0;
    for (std::size_t l = tail.begin; l < tail.end; ++l) {
      acc += (ws.y(l) - fminus.at(ws, j, l) - g[l]) * base[l] * ws.phi(j, l);
    }
    theta[j] = acc / static_cast<double>(tail.size());
  }
  return theta;
}

/// Theta_hat_k = L_k^{-1} sum_{j in B_k} U_j with U_j the pair U-statistic of
/// a_l = (Y_l - ca_j(l)) phi_j(X_l) / pa_l and b_l = (Y_l - cb_j(l)) phi_j(X_l) / pb_l.
template <class CenterA, class CenterB>
[[nodiscard]] inline std::vector<double> block_energy_statistics(const Workspace& ws, const BlockScheme& s,
                                                                 IndexRange r, const std::vector<double>& pa,
                                                                 const std::vector<double>& pb, CenterA&& ca,
                                                                 CenterB&& cb) {
  const std::size_t m = r.size();
  std::vector<double> a(m), bv(m), out(s.K, 0.0);
  for (std::size_t k = 0; k < s.K; ++k) {
    const auto& B = s.blocks[k];
    double acc = 0.0;
    for (std::size_t j = B.first; j <= B.last(); ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t l = r.begin + i;
        const double ph = ws.phi(j, l);
        a[i] = (ws.y(l) - ca(j, l)) * ph / pa[l];
        bv[i] = (ws.y(l) - cb(j, l)) * ph / pb[l];
      }
      acc += pair_mean(a, bv);
    }
    out[k] = acc / static_cast<double>(B.length);
  }
  return out;
}

[[nodiscard]] inline std::vector<double> floored(std::vector<double> v, GuardLog& guards, const std::string& site) {
  for (auto& x : v) x = guards.floor(site, x);
  return v;
}

inline constexpr auto kNoCenter = [](std::size_t, std::size_t) { return 0.0; };

[[nodiscard]] inline GridFunction on_working_grid(const GridFunction& f, const std::vector<std::size_t>& shape) {
  return f.shape() == shape ? f : f.resample(shape);
}

}  // namespace detail

/// Setting 1: g, sigma, p and d known. With divisor 1 this is the D-estimator.
[[nodiscard]] inline ShrinkageStatistics setting1_statistics(const EstimatorInputs& in) {
  const auto& s = in.scheme;
  const auto cut = make_cutoffs(s, in.data->aux_dim, false, false);
  Workspace ws(*in.data, detail::workspace_frequency(s, cut), in.options.grid_shape);
  ShrinkageStatistics out;
  auto& guards = out.guards;

  const auto& design = *in.known.design;
  const auto& sigma = *in.known.sigma;
  const auto g = detail::known_additive_at_points(ws, *in.known.g);
  const auto p = known_density(ws, design);
  const auto marginal = design.integrate_trailing();
  std::vector<double> pm(ws.n()), w(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) {
    const double x = in.data->x[l];
    pm[l] = guards.floor("density", marginal.interpolate(&x));
    const double sg = ws.at_point(sigma, l);
    w[l] = 1.0 / (sg * sg);
  }
  const auto inv_var = sigma.map([](double v) { return 1.0 / (v * v); });
  const auto info = information_at_points(ws, conditional_information(design, inv_var), guards);

  const auto fminus = leave_one_out_series(ws, s.group(1), cut.regression,
                                           [&](std::size_t l) { return (ws.y(l) - g[l]) / pm[l]; });
  out.theta_hat = detail::coefficient_statistics(ws, s, s.tail(2), fminus, g, w, info);

  if (in.options.marginal_block_energy) {
    auto center = [&](std::size_t, std::size_t l) { return g[l]; };
    out.block_energy = detail::block_energy_statistics(ws, s, s.group(2), pm, pm, center, center);
  } else {
    const auto pj = detail::floored(p.points, guards, "density");
    out.block_energy = detail::block_energy_statistics(ws, s, s.group(2), pj, pj, detail::kNoCenter, detail::kNoCenter);
  }
  out.d_hat = *in.known.d;
  return out;
}

/// Setting 2: sigma, p and d known; g estimated; sigma^{-2} replaced by its Fejer approximation.
[[nodiscard]] inline ShrinkageStatistics setting2_statistics(const EstimatorInputs& in) {
  const auto& s = in.scheme;
  const auto cut = make_cutoffs(s, in.data->aux_dim, false, false);
  Workspace ws(*in.data, detail::workspace_frequency(s, cut), in.options.grid_shape);
  ShrinkageStatistics out;
  auto& guards = out.guards;

  const auto& design = *in.known.design;
  const auto pj = detail::floored(known_density(ws, design).points, guards, "density");
  const auto sigma2 = in.known.sigma->map([](double v) { return v * v; });
  const auto eta = fejer_inverse_scale(sigma2, s.b);
  std::vector<double> w(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) w[l] = ws.eval_joint(eta, l);
  const auto info = information_at_points(ws, conditional_information(design, eta.on_grid(design.shape())), guards);

  auto over_p = [&](std::size_t l) { return ws.y(l) / pj[l]; };
  const auto fminus = leave_one_out_series(ws, s.group(1), cut.regression, over_p);
  out.block_energy = detail::block_energy_statistics(ws, s, s.group(2), pj, pj, detail::kNoCenter, detail::kNoCenter);
  const auto g = additive_estimate(ws, s.group(3), cut.additive, over_p, in.options.shrink_additive);
  out.theta_hat = detail::coefficient_statistics(ws, s, s.tail(3), fminus, g, w, info);
  out.d_hat = *in.known.d;
  return out;
}

/// Setting 3: p known; g, sigma and d estimated with the scale clamped to [c_*, c^*].
[[nodiscard]] inline ShrinkageStatistics setting3_statistics(const EstimatorInputs& in) {
  const auto& s = in.scheme;
  const auto cut = make_cutoffs(s, in.data->aux_dim, false, false);
  Workspace ws(*in.data, detail::workspace_frequency(s, cut), in.options.grid_shape);
  ShrinkageStatistics out;
  auto& guards = out.guards;
  const double lo = in.options.c_lower, hi = in.options.c_upper;

  DensityView p = known_density(ws, *in.known.design);
  p.points = detail::floored(p.points, guards, "density");
  p.grid = detail::on_working_grid(p.grid, ws.grid_shape());

  const auto q1 = regression_surface(ws, s.group(4), s.b, p, guards);
  const auto sigma1 = scale_surface(ws, s.group(5), s.b, q1, p, lo, hi, guards);
  out.d_hat = difficulty_from_surfaces(p.grid, sigma1, guards);

  const auto q = regression_surface(ws, s.group(6), s.b, p, guards);
  const auto sigma2 = scale_surface(ws, s.group(7), s.b, q, p, lo, hi, guards);
  const auto eta = fejer_inverse_scale(sigma2, s.b);
  std::vector<double> w(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) w[l] = ws.eval_joint(eta, l);
  const auto info = information_at_points(ws, conditional_information(p.grid, eta.on_grid(ws.grid_shape())), guards);

  auto over_p = [&](std::size_t l) { return ws.y(l) / p.points[l]; };
  const auto fminus = leave_one_out_series(ws, s.group(1), cut.regression, over_p);
  out.block_energy =
      detail::block_energy_statistics(ws, s, s.group(2), p.points, p.points, detail::kNoCenter, detail::kNoCenter);
  const auto g = additive_estimate(ws, s.group(3), cut.additive, over_p, in.options.shrink_additive);
  out.theta_hat = detail::coefficient_statistics(ws, s, s.tail(7), fminus, g, w, info);
  return out;
}

/// Settings 4 and 5: only the data and [c_*, c^*] are known. `sobolev` selects
/// the Sobolev-design cutoffs and the centred block-energy statistic. With
/// divisor 1 and the analytic flag this is the S-estimator.
[[nodiscard]] inline ShrinkageStatistics fully_adaptive_statistics(const EstimatorInputs& in, bool sobolev) {
  const auto& s = in.scheme;
  const std::size_t D = in.data->aux_dim;
  const auto cut = make_cutoffs(s, D, true, sobolev);
  Workspace ws(*in.data, detail::workspace_frequency(s, cut), in.options.grid_shape);
  ShrinkageStatistics out;
  auto& guards = out.guards;
  const double lo = in.options.c_lower, hi = in.options.c_upper;
  const double floor = in.options.density_floor > 0.0 ? in.options.density_floor : 1.0 / static_cast<double>(s.c + 1);

  // Density estimates depend only on (group, cutoff); aliased groups share one.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, DensityView> cache;
  auto density = [&](std::size_t group, std::size_t N) -> const DensityView& {
    const auto r = s.group(group);
    auto key = std::make_tuple(r.begin, r.end, N);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, projection_density(ws, r, N, floor)).first;
    return it->second;
  };
  auto p_tilde = [&](std::size_t k) -> const DensityView& { return density(k, cut.density); };
  auto p_check = [&](std::size_t k) -> const DensityView& { return density(15 + k, cut.density_refined); };

  // Coefficient of difficulty.
  const auto q1 = regression_surface(ws, s.group(10), s.b, p_tilde(1), guards);
  const auto sigma1 = scale_surface(ws, s.group(11), s.b, q1, p_tilde(2), lo, hi, guards);
  out.d_hat = difficulty_from_surfaces(p_tilde(3).grid, sigma1, guards);

  // Leave-one-out regression and additive component.
  const auto& p4 = p_tilde(4);
  const auto fminus =
      leave_one_out_series(ws, s.group(12), cut.regression, [&](std::size_t l) { return ws.y(l) / p4.points[l]; });
  const auto& p5 = p_tilde(5);
  const auto g = additive_estimate(ws, s.group(13), cut.additive, [&](std::size_t l) { return ws.y(l) / p5.points[l]; },
                                   in.options.shrink_additive);

  // Scale, its Fejer inverse and the information function.
  const auto q = regression_surface(ws, s.group(14), s.b, p_tilde(6), guards);
  const auto sigma2 = scale_surface(ws, s.group(15), s.b, q, p_tilde(7), lo, hi, guards);
  const auto eta = fejer_inverse_scale(sigma2, s.b);
  std::vector<double> w(ws.n());
  for (std::size_t l = 0; l < ws.n(); ++l) w[l] = ws.eval_joint(eta, l);
  const auto info =
      information_at_points(ws, conditional_information(p_check(1).grid, eta.on_grid(ws.grid_shape())), guards);

  // Block energies.
  const auto& pc2 = p_check(2);
  const auto& pc3 = p_check(3);
  if (!sobolev) {
    out.block_energy =
        detail::block_energy_statistics(ws, s, s.group(21), pc2.points, pc3.points, detail::kNoCenter, detail::kNoCenter);
  } else {
    std::vector<LeaveOneOutSeries> qx;
    std::vector<std::vector<double>> qz;
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto& pk = p_tilde(7 + k);
      auto wk = [&](std::size_t l) { return ws.y(l) / pk.points[l]; };
      qx.push_back(leave_one_out_series(ws, s.group(18 + k), cut.regression, wk));
      qz.push_back(additive_estimate(ws, s.group(18 + k), cut.additive, wk, in.options.shrink_additive));
    }
    auto c1 = [&](std::size_t j, std::size_t l) { return qx[0].at(ws, j, l) + qz[0][l]; };
    auto c2 = [&](std::size_t j, std::size_t l) { return qx[1].at(ws, j, l) + qz[1][l]; };
    out.block_energy = detail::block_energy_statistics(ws, s, s.group(21), pc2.points, pc3.points, c1, c2);
  }

  out.theta_hat = detail::coefficient_statistics(ws, s, s.tail(21), fminus, g, w, info);
  return out;
}

/// E-baseline: ignores Z and the scale. Uses the marginal design density
/// (known, or a projection estimate with cutoff b floored at 1/c).
[[nodiscard]] inline ShrinkageStatistics e_baseline_statistics(const EstimatorInputs& in) {
  const auto& s = in.scheme;
  const IndexRange all{0, in.data->size()};
  Workspace ws(*in.data, std::max(s.max_frequency(), s.b), in.options.grid_shape);
  ShrinkageStatistics out;
  auto& guards = out.guards;

  std::vector<double> p(ws.n());
  if (in.options.e_known_design) {
    const auto marginal = in.known.design->integrate_trailing();
    for (std::size_t l = 0; l < ws.n(); ++l) {
      const double x = in.data->x[l];
      p[l] = guards.floor("density", marginal.interpolate(&x));
    }
  } else {
    const auto a = ws.x_projection(all, s.b, [](std::size_t) { return 1.0; });
    const double floor = 1.0 / static_cast<double>(s.c);
    for (std::size_t l = 0; l < ws.n(); ++l) p[l] = std::max(floor, ws.eval_x(a, l));
  }

  const auto fminus = leave_one_out_series(ws, all, s.b, [&](std::size_t l) { return ws.y(l) / p[l]; });
  const std::vector<double> zero(ws.n(), 0.0), one(ws.n(), 1.0);
  out.theta_hat = detail::coefficient_statistics(ws, s, all, fminus, zero, one, p);
  out.block_energy = detail::block_energy_statistics(ws, s, all, p, p, detail::kNoCenter, detail::kNoCenter);

  double acc = 0.0;
  for (std::size_t l = 0; l < ws.n(); ++l) {
    const double r = ws.y(l) - fminus.full[l];
    acc += r * r / (p[l] * p[l]);
  }
  out.d_hat = acc / static_cast<double>(ws.n());
  return out;
}

/// Theta_k = L_k^{-1} sum_{j in B_k} (theta_hat_j^2 - d / n).
[[nodiscard]] inline std::vector<double> plug_in_block_energy(const std::vector<double>& theta_hat, double d,
                                                              const BlockScheme& s) {
  if (theta_hat.size() != s.coefficient_count()) throw ValidationError("plug_in_block_energy: size mismatch");
  const double noise = d / static_cast<double>(s.n);
  std::vector<double> out(s.K, 0.0);
  for (std::size_t k = 0; k < s.K; ++k) {
    double acc = 0.0;
    for (std::size_t j = s.blocks[k].first; j <= s.blocks[k].last(); ++j) acc += theta_hat[j] * theta_hat[j] - noise;
    out[k] = acc / static_cast<double>(s.blocks[k].length);
  }
  return out;
}

/// Statistics of any data-driven setting (everything except the dataset-free oracle).
[[nodiscard]] inline ShrinkageStatistics shrinkage_statistics(const EstimatorInputs& in) {
  in.validate();
  switch (in.setting) {
    case Setting::oracle:
    case Setting::s1:
    case Setting::no_split_D: return setting1_statistics(in);
    case Setting::s2: return setting2_statistics(in);
    case Setting::s3: return setting3_statistics(in);
    case Setting::s4_analytic:
    case Setting::no_split_S: return fully_adaptive_statistics(in, false);
    case Setting::s5_sobolev: return fully_adaptive_statistics(in, true);
    case Setting::e_baseline: return e_baseline_statistics(in);
  }
  throw ValidationError("unknown setting");
}

/// Fits the estimator selected by in.setting.
[[nodiscard]] inline SeriesEstimate fit_estimate(const EstimatorInputs& in) {
  in.validate();
  if (in.setting == Setting::oracle) {
    if (in.data == nullptr) return oracle_estimate(in.known.theta, *in.known.d, in.scheme);
    auto stats = setting1_statistics(in);
    auto est = oracle_estimate(in.known.theta, *in.known.d, in.scheme, std::move(stats.theta_hat));
    est.guards = std::move(stats.guards);
    return est;
  }
  auto stats = shrinkage_statistics(in);
  double d = stats.d_hat;
  if (in.options.project_d_hat) d = d_hat_projection(d, in.scheme, in.options.C2);
  if (in.options.block_energy == BlockEnergy::plug_in) stats.block_energy = plug_in_block_energy(stats.theta_hat, d, in.scheme);
  auto est = assemble_estimate(std::move(stats.theta_hat), std::move(stats.block_energy), d, in.scheme);
  est.tag = to_string(in.setting);
  est.guards = std::move(stats.guards);
  return est;
}

/// Default [c_*, c^*]: the range of sigma^2 on the model grid, widened by a
/// factor 2 on each side when sigma is constant.
[[nodiscard]] inline std::pair<double, double> default_scale_bounds(const RegressionModel& model) {
  const double lo = model.sigma.min_value(), hi = model.sigma.max_value();
  double a = lo * lo, b = hi * hi;
  if (!(b > a * (1.0 + 1e-9))) {
    a *= 0.5;
    b *= 2.0;
  }
  return {a, b};
}

/// True cosine coefficients theta_0..theta_J of the model regression function.
[[nodiscard]] inline std::vector<double> true_coefficients(const RegressionModel& model, std::size_t J) {
  const auto c = fourier_coefficients(model.f, J);
  return {c.coefficients().begin(), c.coefficients().end()};
}

/// Inputs for fitting `setting` to data drawn from `model`, with every
/// nuisance the model can supply filled in.
[[nodiscard]] inline EstimatorInputs inputs_for_model(const RegressionModel& model, const SampledDataset& data,
                                                      Setting setting, bool split = false,
                                                      EstimatorOptions options = {}) {
  EstimatorInputs in;
  in.data = &data;
  in.setting = setting;
  in.scheme = build_scheme(data.size(), split_divisor(setting, split));
  in.known.g = model.g;
  in.known.sigma = model.sigma;
  in.known.design = model.design;
  in.known.d = coefficient_of_difficulty(model).d;
  if (setting == Setting::oracle) in.known.theta = true_coefficients(model, in.scheme.max_frequency());
  if (options.c_lower <= 0.0 || options.c_upper <= 0.0) {
    std::tie(options.c_lower, options.c_upper) = default_scale_bounds(model);
  }
  in.options = std::move(options);
  return in;
}

}  // namespace bshrink
