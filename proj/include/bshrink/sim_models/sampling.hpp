#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bshrink/errors.hpp"
#include "bshrink/function_space/grid_function.hpp"
#include "bshrink/sim_models/model.hpp"
#include "bshrink/sim_models/rng.hpp"

namespace bshrink {

/// Columnar sample of (X, Z, Y). z is stored row-major, aux_dim values per row.
struct SampledDataset {
  std::size_t aux_dim = 1;
  std::vector<double> x;
  std::vector<double> z;
  std::vector<double> y;
  std::uint64_t seed = 0;
  std::string model_tag;

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  [[nodiscard]] const double* z_row(std::size_t i) const noexcept { return z.data() + i * aux_dim; }

  /// First k rows, keeping seed and tag.
  [[nodiscard]] SampledDataset prefix(std::size_t k) const {
    if (k > size()) throw ValidationError("SampledDataset::prefix: k exceeds sample size");
    SampledDataset out;
    out.aux_dim = aux_dim;
    out.x.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
    out.z.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k * aux_dim));
    out.y.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(k));
    out.seed = seed;
    out.model_tag = model_tag;
    return out;
  }

  void validate() const {
    if (size() == 0) throw ValidationError("SampledDataset: n must be >= 1");
    if (aux_dim < 1 || aux_dim > kMaxAuxDim) throw ValidationError("SampledDataset: bad auxiliary dimension");
    if (z.size() != size() * aux_dim || y.size() != size()) {
      throw ValidationError("SampledDataset: column lengths disagree");
    }
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!std::all_of(x.begin(), x.end(), in_unit) || !std::all_of(z.begin(), z.end(), in_unit)) {
      throw ValidationError("SampledDataset: covariates must lie in [0,1]");
    }
    if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
      throw ValidationError("SampledDataset: non-finite response");
    }
  }

  friend bool operator==(const SampledDataset&, const SampledDataset&) = default;
};

/// Draws covariate points from a grid density. Product densities use an
/// inverse CDF per axis on the piecewise-constant cell masses; other densities
/// use rejection with the grid maximum as envelope.
class DesignSampler {
 public:
  explicit DesignSampler(GridFunction density) : p_(std::move(density)) {
    const std::size_t k = p_.dimension();
    const auto& shape = p_.shape();
    const double total = p_.integral();
    if (!(total > 0.0) || p_.min_value() < 0.0) throw ValidationError("DesignSampler: invalid density");
    envelope_ = p_.max_value();

    // Marginal cell means per axis.
    std::vector<std::vector<double>> marg(k);
    for (std::size_t t = 0; t < k; ++t) marg[t].assign(shape[t], 0.0);
    std::vector<std::size_t> idx(k, 0);
    const auto vals = p_.values();
    for (std::size_t flat = 0; flat < vals.size(); ++flat) {
      for (std::size_t t = 0; t < k; ++t) marg[t][idx[t]] += vals[flat];
      for (std::size_t t = k; t-- > 0;) {
        if (++idx[t] < shape[t]) break;
        idx[t] = 0;
      }
    }
    for (std::size_t t = 0; t < k; ++t) {
      const double others = static_cast<double>(vals.size() / shape[t]);
      for (auto& v : marg[t]) v /= others;
    }

    product_ = true;
    std::fill(idx.begin(), idx.end(), 0);
    const double scale = std::pow(total, static_cast<double>(k) - 1.0);
    for (std::size_t flat = 0; flat < vals.size() && product_; ++flat) {
      double prod = 1.0;
      for (std::size_t t = 0; t < k; ++t) prod *= marg[t][idx[t]];
      if (std::abs(vals[flat] - prod / scale) > 1e-9 * envelope_) product_ = false;
      for (std::size_t t = k; t-- > 0;) {
        if (++idx[t] < shape[t]) break;
        idx[t] = 0;
      }
    }

    if (product_) {
      cdf_.resize(k);
      for (std::size_t t = 0; t < k; ++t) {
        auto& c = cdf_[t];
        c.assign(shape[t] + 1, 0.0);
        for (std::size_t i = 0; i < shape[t]; ++i) c[i + 1] = c[i] + marg[t][i];
        const double last = c.back();
        for (auto& v : c) v /= last;
        c.back() = 1.0;
      }
    }
  }

  [[nodiscard]] bool product_form() const noexcept { return product_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return p_.dimension(); }

  /// Writes dimension() coordinates into point.
  template <class R>
  void draw(R& rng, double* point) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t k = p_.dimension();
    if (product_) {
      for (std::size_t t = 0; t < k; ++t) point[t] = invert(cdf_[t], unif(rng));
      return;
    }
    for (;;) {
      for (std::size_t t = 0; t < k; ++t) point[t] = unif(rng);
      if (unif(rng) * envelope_ < p_.interpolate(point)) return;
    }
  }

 private:
  static double invert(const std::vector<double>& cdf, double u) {
    const std::size_t cells = cdf.size() - 1;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = it == cdf.begin() ? 0 : static_cast<std::size_t>(it - cdf.begin()) - 1;
    if (i >= cells) i = cells - 1;
    const double width = cdf[i + 1] - cdf[i];
    const double frac = width > 0.0 ? std::clamp((u - cdf[i]) / width, 0.0, 1.0) : 0.5;
    return std::clamp((static_cast<double>(i) + frac) / static_cast<double>(cells), 0.0, 1.0);
  }

  GridFunction p_;
  bool product_ = false;
  double envelope_ = 0.0;
  std::vector<std::vector<double>> cdf_;
};

/// Draws n rows from the model. Each row consumes the design draw and then the
/// response draw, so the sample of size n is a prefix of any larger sample
/// drawn with the same seed.
[[nodiscard]] inline SampledDataset sample_dataset(const RegressionModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample_dataset: n must be >= 1");
  model.validate();
  const std::size_t D = model.aux_dim();
  DesignSampler sampler(model.design);
  auto rng = make_rng(seed);

  SampledDataset out;
  out.aux_dim = D;
  out.seed = seed;
  out.model_tag = model.tag;
  out.x.resize(n);
  out.z.resize(n * D);
  out.y.resize(n);

  double point[kMaxDim];
  for (std::size_t i = 0; i < n; ++i) {
    sampler.draw(rng, point);
    out.x[i] = point[0];
    for (std::size_t t = 0; t < D; ++t) out.z[i * D + t] = point[t + 1];
    const double mu = model.mean(point[0], point + 1);
    switch (model.response) {
      case ResponseKind::continuous:
        out.y[i] = mu + model.sigma.interpolate(point) * model.error.draw(rng);
        break;
      case ResponseKind::bernoulli: {
        if (!(mu > 0.0 && mu < 1.0)) throw GuardError("sample_dataset: Bernoulli mean outside (0,1)");
        std::bernoulli_distribution d(mu);
        out.y[i] = d(rng) ? 1.0 : 0.0;
        break;
      }
      case ResponseKind::poisson: {
        if (!(mu > 0.0)) throw GuardError("sample_dataset: Poisson mean not positive");
        std::poisson_distribution<long long> d(mu);
        out.y[i] = static_cast<double>(d(rng));
        break;
      }
    }
  }
  return out;
}

}  // namespace bshrink
