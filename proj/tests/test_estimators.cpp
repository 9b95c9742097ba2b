#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bshrink/estimators.hpp"
#include "bshrink/risk_eval.hpp"
#include "bshrink/sim_models/scenarios.hpp"

namespace bshrink {
namespace {

struct Summary {
  double mean = 0.0, se = 0.0;
};

Summary summarize(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  Summary out;
  out.mean = s / n;
  double s2 = 0.0;
  for (double x : v) s2 += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(s2 / (n - 1.0) / n);
  return out;
}

ScenarioSpec flat_spec(double lambda = 0.0) {
  ScenarioSpec s;
  s.name = "flat";
  s.lambda = lambda;
  s.grid_nodes = 256;
  s.regression.kind = RegressionShape::Kind::constant;
  s.regression.amplitude = 0.0;
  return s;
}

ScenarioSpec cosine_spec(std::vector<double> coefficients, double lambda = 0.0) {
  auto s = flat_spec(lambda);
  s.name = "cosine";
  s.regression.kind = RegressionShape::Kind::cosine_series;
  s.regression.coefficients = std::move(coefficients);
  return s;
}

SampledDataset hand_dataset(std::vector<double> x, std::vector<double> z, std::vector<double> y) {
  SampledDataset d;
  d.aux_dim = 1;
  d.x = std::move(x);
  d.z = std::move(z);
  d.y = std::move(y);
  return d;
}

TEST(UStatistic, PrefixSumMatchesPairEnumeration) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (std::size_t m : {2u, 3u, 17u, 64u}) {
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = nd(rng);
      b[i] = nd(rng);
    }
    double brute = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = i + 1; k < m; ++k) brute += a[i] * b[k];
    EXPECT_NEAR(ordered_pair_sum(a, b), brute, 1e-12 * (1.0 + std::abs(brute)));
    EXPECT_NEAR(pair_mean(a, a), 2.0 * ordered_pair_sum(a, a) / (double(m) * double(m - 1)), 1e-14);
  }
  const std::vector<double> one{1.0};
  EXPECT_THROW((void)pair_mean(one, one), GuardError);
}

TEST(UStatistic, TwoPointSampleByHand) {
  const auto data = hand_dataset({0.2, 0.7}, {0.1, 0.9}, {1.5, -0.5});
  const auto scheme = build_scheme(2, 1);
  Workspace ws(data, scheme.max_frequency(), {});
  const std::vector<double> p{1.0, 1.0};
  const auto energy =
      detail::block_energy_statistics(ws, scheme, IndexRange{0, 2}, p, p, detail::kNoCenter, detail::kNoCenter);
  for (std::size_t k = 0; k < scheme.K; ++k) {
    const auto& B = scheme.blocks[k];
    double expected = 0.0;
    for (std::size_t j = B.first; j <= B.last(); ++j) expected += 1.5 * cos_basis(j, 0.2) * -0.5 * cos_basis(j, 0.7);
    EXPECT_NEAR(energy[k], expected / double(B.length), 1e-14) << k;
  }
  const auto zero = hand_dataset({0.2, 0.7}, {0.1, 0.9}, {0.0, 0.0});
  Workspace wz(zero, scheme.max_frequency(), {});
  for (double e : detail::block_energy_statistics(wz, scheme, IndexRange{0, 2}, p, p, detail::kNoCenter,
                                                  detail::kNoCenter))
    EXPECT_EQ(e, 0.0);
}

TEST(Assembly, ThresholdAndWeights) {
  const auto s = build_scheme(100, 1);
  const double n = 100.0, bn = double(s.b) * n;
  std::vector<double> theta(s.coefficient_count(), 0.3);

  auto zero = assemble_estimate(theta, std::vector<double>(s.K, 0.0), 1.0, s);
  for (double w : zero.weights) EXPECT_EQ(w, 0.0);
  EXPECT_EQ(zero(0.4), 0.0);

  auto kept = assemble_estimate(theta, std::vector<double>(s.K, 2.0 / bn), 1e-9, s);
  for (double w : kept.weights) EXPECT_NEAR(w, 1.0, 1e-6);

  auto dropped = assemble_estimate(theta, std::vector<double>(s.K, 0.5 / bn), 1e-9, s);
  for (double w : dropped.weights) EXPECT_EQ(w, 0.0);

  auto negative = assemble_estimate(theta, std::vector<double>(s.K, -1.0), 1.0, s);
  for (double w : negative.weights) EXPECT_EQ(w, 0.0);

  EXPECT_THROW((void)assemble_estimate(theta, std::vector<double>(s.K, 1.0), 0.0, s), GuardError);
  EXPECT_THROW((void)assemble_estimate(theta, std::vector<double>(s.K + 1, 1.0), 1.0, s), ValidationError);
}

TEST(Assembly, WeightsAreMonotone) {
  const auto s = build_scheme(400, 1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 0.05);
  const std::vector<double> theta(s.coefficient_count(), 0.1);
  for (int trial = 0; trial < 200; ++trial) {
    const double T = u(rng), dT = u(rng), d = 0.5 + 4.0 * u(rng), dd = 4.0 * u(rng);
    const auto base = assemble_estimate(theta, std::vector<double>(s.K, T), d, s);
    const auto more_energy = assemble_estimate(theta, std::vector<double>(s.K, T + dT), d, s);
    const auto more_noise = assemble_estimate(theta, std::vector<double>(s.K, T), d + dd, s);
    EXPECT_GE(more_energy.weights[0], base.weights[0]);
    EXPECT_LE(more_noise.weights[0], base.weights[0]);
  }
}

TEST(Oracle, ClosedFormWeights) {
  const auto s = build_scheme(100, 1);
  const std::vector<double> zeros(s.coefficient_count(), 0.0);
  const auto z = oracle_estimate(zeros, 1.0, s);
  for (double w : z.weights) EXPECT_EQ(w, 0.0);
  EXPECT_EQ(z(0.3), 0.0);

  std::vector<double> balance(s.coefficient_count(), 0.0);
  balance[1] = std::sqrt(2.0 / 100.0);
  EXPECT_DOUBLE_EQ(oracle_estimate(balance, 2.0, s).weights[1], 0.5);

  std::vector<double> first(s.coefficient_count(), 0.0);
  first[0] = 1.0;
  EXPECT_NEAR(oracle_estimate(first, 1.0, s).weights[0], 0.990099, 1e-6);

  EXPECT_THROW((void)oracle_estimate(std::vector<double>(2, 0.0), 1.0, s), ValidationError);
}

TEST(Oracle, AssemblyWithExactInputsReproducesOracle) {
  const auto s = build_scheme(400, 1);
  std::vector<double> theta(s.coefficient_count());
  for (std::size_t j = 0; j < theta.size(); ++j) theta[j] = 1.0 / double((j + 1) * (j + 1));
  std::vector<double> energy;
  const auto w = oracle_weights(theta, 1.5, s, &energy);
  const auto assembled = assemble_estimate(theta, energy, 1.5, s);
  const double threshold = 1.0 / (double(s.b) * 400.0);
  for (std::size_t k = 0; k < s.K; ++k) {
    if (energy[k] > threshold) {
      EXPECT_NEAR(assembled.weights[k], w[k], 1e-15);
    } else {
      EXPECT_EQ(assembled.weights[k], 0.0);
    }
  }
}

TEST(DHatProjection, ClampsIntoAdmissibleInterval) {
  const auto s = build_scheme(100, 7);
  ASSERT_EQ(s.b, 4u);
  EXPECT_NEAR(d_hat_projection(1.6, s), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(d_hat_projection(1.0, s), 1.0);
  EXPECT_NEAR(d_hat_projection(0.1, s), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW((void)d_hat_projection(1.0, s, 0.5), ValidationError);
}

TEST(BonaFide, ClampsDiscreteRanges) {
  const auto dip = GridFunction::sample_1d(64, [](double x) { return x < 0.5 ? -0.2 : 0.6; });
  EXPECT_NEAR(bona_fide_clamp(dip, ResponseKind::bernoulli).min_value(), 0.001, 1e-15);
  const auto inside = GridFunction::sample_1d(64, [](double x) { return 0.2 + 0.5 * x; });
  EXPECT_EQ(bona_fide_clamp(inside, ResponseKind::bernoulli).values()[10], inside.values()[10]);
  EXPECT_NEAR(bona_fide_clamp(GridFunction::constant({8}, 0.0), ResponseKind::poisson).max_value(), 0.001, 1e-15);
  EXPECT_THROW((void)bona_fide_clamp(inside, ResponseKind::continuous), ValidationError);
}

TEST(Cutoffs, DensityCutoffsAtThousand) {
  const auto s = build_scheme(1000, 1);
  EXPECT_EQ(make_cutoffs(s, 1, true, false).density, 6u);
  EXPECT_EQ(make_cutoffs(s, 1, true, true).density, 3u);
  EXPECT_EQ(make_cutoffs(s, 1, true, true).regression, 10u);
  EXPECT_EQ(make_cutoffs(s, 1, false, false).additive, 1000u / 36u);
}

TEST(InputValidation, SettingsCheckTheirNuisances) {
  const auto model = make_scenario(flat_spec(1.0));
  const auto data = sample_dataset(model, 200, 3);
  auto in = inputs_for_model(model, data, Setting::s1, true);
  EXPECT_EQ(in.scheme.divisor, 7u);
  EXPECT_NO_THROW(in.validate());
  in.known.g.reset();
  EXPECT_THROW(in.validate(), ValidationError);

  auto wrong = inputs_for_model(model, data, Setting::s4_analytic, true);
  wrong.scheme = build_scheme(200, 7);
  EXPECT_THROW(wrong.validate(), ValidationError);

  auto bounds = inputs_for_model(model, data, Setting::s3);
  bounds.options.c_lower = 2.0;
  bounds.options.c_upper = 1.0;
  EXPECT_THROW(bounds.validate(), ValidationError);
  EXPECT_THROW((void)parse_setting("nope"), ValidationError);
}

TEST(Setting1, UnitScaleWeightsAreOne) {
  const auto model = make_scenario(flat_spec(0.0));
  const auto data = sample_dataset(model, 300, 4);
  const auto in = inputs_for_model(model, data, Setting::no_split_D);
  const auto stats = setting1_statistics(in);
  Workspace ws(data, in.scheme.max_frequency(), {});
  const auto fminus = leave_one_out_series(ws, IndexRange{0, 300}, in.scheme.b, [&](std::size_t l) { return ws.y(l); });
  for (std::size_t j : {0u, 1u, 5u}) {
    double acc = 0.0;
    for (std::size_t l = 0; l < 300; ++l) acc += (ws.y(l) - fminus.at(ws, j, l)) * ws.phi(j, l);
    EXPECT_NEAR(stats.theta_hat[j], acc / 300.0, 1e-9) << j;
  }
}

TEST(Setting1, CoefficientIsUnbiasedUnderPureNoise) {
  const auto model = make_scenario(flat_spec(0.0));
  std::vector<double> draws;
  for (std::uint64_t r = 0; r < 200; ++r) {
    const auto data = sample_dataset(model, 10000, 1000 + r);
    draws.push_back(setting1_statistics(inputs_for_model(model, data, Setting::no_split_D)).theta_hat[3]);
  }
  const auto s = summarize(draws);
  EXPECT_LE(std::abs(s.mean), 4.0 * s.se) << s.mean << " " << s.se;
}

TEST(Setting1, WeightsHaveUnitMean) {
  // E{sigma^{-2}(X,Z) / I(X)} = 1 for uniform p and sigma = exp(lambda z / 2).
  const double lambda = 2.0;
  const double info = (1.0 - std::exp(-lambda)) / lambda;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t N = 1000000;
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double w = std::exp(-lambda * u(rng)) / info;
    s += w;
    s2 += w * w;
  }
  const double mean = s / double(N);
  const double se = std::sqrt((s2 / double(N) - mean * mean) / double(N));
  EXPECT_LE(std::abs(mean - 1.0), 4.0 * se);
}

TEST(BlockEnergy, UStatisticIsUnbiasedForFirstHarmonic) {
  const auto model = make_scenario(cosine_spec({0.0, 1.0}));
  std::vector<double> draws;
  const auto scheme = build_scheme(200, 1);
  for (std::uint64_t r = 0; r < 500; ++r) {
    const auto data = sample_dataset(model, 200, 5000 + r);
    Workspace ws(data, scheme.max_frequency(), {});
    const std::vector<double> p(200, 1.0);
    draws.push_back(detail::block_energy_statistics(ws, scheme, IndexRange{0, 200}, p, p, detail::kNoCenter,
                                                    detail::kNoCenter)[1]);
  }
  const auto s = summarize(draws);
  EXPECT_LE(std::abs(s.mean - 1.0), 4.0 * s.se) << s.mean << " " << s.se;
}

TEST(Setting2, UnitScaleFejerIsConstantAndInformationIsMarginal) {
  const auto p = GridFunction::constant({64, 64}, 1.0);
  const auto eta = fejer_inverse_scale(GridFunction::constant({64, 64}, 1.0), 5);
  const auto grid = eta.on_grid({64, 64});
  EXPECT_NEAR(grid.min_value(), 1.0, 1e-12);
  EXPECT_NEAR(grid.max_value(), 1.0, 1e-12);
  const auto info = conditional_information(p, grid);
  EXPECT_NEAR(info.min_value(), 1.0, 1e-12);
  EXPECT_NEAR(info.max_value(), 1.0, 1e-12);
}

TEST(Setting2, AdditiveEstimateOfZeroIsSmall) {
  const auto model = make_scenario(flat_spec(0.0));
  const std::size_t n = 4000;
  const auto cut = make_cutoffs(build_scheme(n, 1), 1, false, false);
  double total = 0.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto data = sample_dataset(model, n, 7000 + r);
    Workspace ws(data, cut.additive, {});
    const auto c = ws.z_projection(IndexRange{0, n}, cut.additive, [&](std::size_t l) { return ws.y(l); });
    for (std::size_t s = 1; s < c.size(); ++s) total += c.coefficients()[s] * c.coefficients()[s];
  }
  EXPECT_LT(total / 100.0, 0.05);
}

TEST(Setting2, AdditiveEstimateIsConsistent) {
  auto spec = flat_spec(0.0);
  spec.additive = AdditiveChoice::g1;
  const auto model = make_scenario(spec);
  auto risk = [&](std::size_t n) {
    const auto cut = make_cutoffs(build_scheme(n, 1), 1, false, false);
    double acc = 0.0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      const auto data = sample_dataset(model, n, 9000 + r);
      Workspace ws(data, cut.additive, {});
      auto c = ws.z_projection(IndexRange{0, n}, cut.additive, [&](std::size_t l) { return ws.y(l); });
      c.coefficients()[0] = 0.0;
      const auto est = c.on_grid({256});
      acc += ise(est, model.g, 256);
    }
    return acc / 100.0;
  };
  EXPECT_LT(risk(4000), risk(1000));
}

TEST(Setting2, FejerFidelityImprovesWithOrder) {
  const auto sigma2 = GridFunction::sample({128, 128}, [](std::span<const double> q) { return std::exp(2.0 * q[1]); });
  const auto inv = sigma2.map([](double v) { return 1.0 / v; });
  double prev = 1e300;
  for (std::size_t b : {4u, 8u, 16u}) {
    const auto approx = fejer_inverse_scale(sigma2, b).on_grid({128, 128});
    const double err = approx.combine(inv, [](double a, double c) { return (a - c) * (a - c); }).integral();
    EXPECT_LT(err, prev) << b;
    prev = err;
  }
}

TEST(Setting3, DifficultyOfConstantScale) {
  auto spec = flat_spec(0.0);
  spec.scale_multiplier = 2.0;
  const auto model = make_scenario(spec);
  double acc = 0.0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto data = sample_dataset(model, 4000, 11000 + r);
    auto in = inputs_for_model(model, data, Setting::s3);
    in.options.c_lower = 1.0;
    in.options.c_upper = 9.0;
    const double d = setting3_statistics(in).d_hat;
    EXPECT_GE(d, 1.0 - 1e-9);
    EXPECT_LE(d, 9.0 + 1e-9);
    acc += d;
  }
  EXPECT_NEAR(acc / 100.0, 4.0, 0.4);
}

TEST(Setting3, ScaleClampIsActiveBelowLowerBound) {
  const auto model = make_scenario(flat_spec(0.0));
  const auto data = sample_dataset(model, 500, 12);
  auto in = inputs_for_model(model, data, Setting::s3);
  in.options.c_lower = 5.0;
  in.options.c_upper = 9.0;
  EXPECT_NEAR(setting3_statistics(in).d_hat, 5.0, 1e-9);
}

TEST(DensityEstimate, UniformDesignAndFloor) {
  // For the uniform design every non-constant tensor coefficient has unit
  // variance, so before the floor E int (p - 1)^2 = ((N + 1)^2 - 1) / n.
  const auto model = make_scenario(flat_spec(0.0));
  const std::size_t n = 4000;
  const auto s = build_scheme(n, 1);
  for (bool sobolev : {false, true}) {
    const auto cut = make_cutoffs(s, 1, true, sobolev);
    const double side = static_cast<double>(cut.density + 1);
    const double expected = (side * side - 1.0) / static_cast<double>(n);
    std::vector<double> draws;
    for (std::uint64_t r = 0; r < 100; ++r) {
      const auto data = sample_dataset(model, n, 13000 + r);
      Workspace ws(data, cut.density, {64, 64});
      const auto p = projection_density(ws, IndexRange{0, n}, cut.density, 1.0 / double(s.c));
      EXPECT_GE(p.grid.min_value(), 1.0 / double(s.c));
      for (double v : p.points) EXPECT_GE(v, 1.0 / double(s.c));
      draws.push_back(p.grid.map([](double v) { return (v - 1.0) * (v - 1.0); }).integral());
    }
    const auto sm = summarize(draws);
    EXPECT_LE(sm.mean, expected + 4.0 * sm.se) << sobolev;
    EXPECT_GE(sm.mean, 0.8 * expected) << sobolev;
    if (sobolev) EXPECT_LT(sm.mean, 0.05);
  }
}

TEST(FullyAdaptive, PureNoiseIsSuppressed) {
  const auto model = make_scenario(flat_spec(0.0));
  double s_energy = 0.0, e_energy = 0.0;
  const int R = 200;
  for (int r = 0; r < R; ++r) {
    const auto data = sample_dataset(model, 400, 15000 + r);
    const auto zero = GridFunction::constant({256}, 0.0);
    s_energy += ise(fit_estimate(inputs_for_model(model, data, Setting::no_split_S)), zero);
    e_energy += ise(fit_estimate(inputs_for_model(model, data, Setting::e_baseline)), zero);
  }
  EXPECT_LT(s_energy / R, 0.1);
  EXPECT_LT(e_energy / R, 0.1);
}

TEST(FullyAdaptive, HomoscedasticMatchesBaseline) {
  const auto model = make_scenario(find_scenario("homoscedastic"));
  double s = 0.0, e = 0.0;
  for (int r = 0; r < 500; ++r) {
    const auto data = sample_dataset(model, 400, 17000 + r);
    s += ise(fit_estimate(inputs_for_model(model, data, Setting::no_split_S)), model.f);
    e += ise(fit_estimate(inputs_for_model(model, data, Setting::e_baseline)), model.f);
  }
  EXPECT_LT(std::abs(s / e - 1.0), 0.25) << s / e;
}

TEST(FullyAdaptive, BaselineLosesUnderHeteroscedasticity) {
  const auto model = make_scenario(find_scenario("lambda2_g0"));
  double s = 0.0, e = 0.0;
  for (int r = 0; r < 500; ++r) {
    const auto data = sample_dataset(model, 200, 19000 + r);
    s += ise(fit_estimate(inputs_for_model(model, data, Setting::no_split_S)), model.f);
    e += ise(fit_estimate(inputs_for_model(model, data, Setting::e_baseline)), model.f);
  }
  EXPECT_GT(e / s, 1.0);
}

TEST(FullyAdaptive, BellShapedFitAtSmallSample) {
  const auto model = make_scenario(find_scenario("lambda2_g0"));
  int centred = 0;
  for (int r = 0; r < 20; ++r) {
    const auto data = sample_dataset(model, 100, 21000 + r);
    const auto grid = fit_estimate(inputs_for_model(model, data, Setting::no_split_S)).on_grid(201);
    const auto v = grid.values();
    const auto at = std::max_element(v.begin(), v.end()) - v.begin();
    const double x = GridFunction::node(static_cast<std::size_t>(at), 201);
    if (x >= 0.4 && x <= 0.6) ++centred;
  }
  EXPECT_GE(centred, 16);
}

TEST(FullyAdaptive, SplitVariantsRun) {
  const auto model = make_scenario(find_scenario("lambda1_g1"));
  const auto data = sample_dataset(model, 4000, 23);
  const double reference = ise(fit_estimate(inputs_for_model(model, data, Setting::no_split_D)), model.f);
  for (Setting s : {Setting::s1, Setting::s2, Setting::s3}) {
    const auto est = fit_estimate(inputs_for_model(model, data, s, true));
    EXPECT_EQ(est.scheme.divisor, 7u);
    EXPECT_LT(ise(est, model.f), 5.0 * reference + 0.01) << to_string(s);
  }
  for (Setting s : {Setting::s4_analytic, Setting::s5_sobolev}) {
    const auto est = fit_estimate(inputs_for_model(model, data, s, true));
    EXPECT_EQ(est.scheme.divisor, 21u);
    EXPECT_LT(ise(est, model.f), 0.25) << to_string(s);
  }
}

TEST(FullyAdaptive, CoefficientSampleIsTheRemainderWhenCIsOne) {
  const auto s7 = build_scheme(1500, 7);
  ASSERT_EQ(s7.c, 1u);
  EXPECT_EQ(s7.tail(7).size(), 1500u - 7u * s7.m);
  const auto s21 = build_scheme(4000, 21);
  ASSERT_EQ(s21.c, 2u);
  EXPECT_EQ(s21.tail(21).size(), 4000u - 21u * s21.m);
  EXPECT_GE(s21.tail(21).size(), 2000u);
}

TEST(FullyAdaptive, DeterministicGivenData) {
  const auto model = make_scenario(find_scenario("lambda3_g2"));
  const auto data = sample_dataset(model, 300, 29);
  const auto a = fit_estimate(inputs_for_model(model, data, Setting::s5_sobolev));
  const auto b = fit_estimate(inputs_for_model(model, data, Setting::s5_sobolev));
  EXPECT_EQ(a.coefficients(), b.coefficients());
  EXPECT_EQ(a.guards, b.guards);
}

TEST(Oracle, DominatesAdaptiveEstimator) {
  for (const char* name : {"lambda1_g0", "lambda3_g0"}) {
    const auto model = make_scenario(find_scenario(name));
    std::vector<double> diff;
    for (int r = 0; r < 100; ++r) {
      const auto data = sample_dataset(model, 400, 31000 + r);
      const double o = ise(fit_estimate(inputs_for_model(model, data, Setting::oracle)), model.f);
      const double s = ise(fit_estimate(inputs_for_model(model, data, Setting::no_split_S)), model.f);
      diff.push_back(o - s);
    }
    const auto sm = summarize(diff);
    EXPECT_LE(sm.mean, 2.0 * sm.se) << name;
  }
}

TEST(EBaseline, EstimatedDesignMatchesKnownOnUniform) {
  const auto model = make_scenario(find_scenario("lambda1_g0"));
  const auto data = sample_dataset(model, 400, 37);
  auto in = inputs_for_model(model, data, Setting::e_baseline);
  const auto known = fit_estimate(in);
  in.options.e_known_design = false;
  in.known.design.reset();
  const auto estimated = fit_estimate(in);
  EXPECT_LT(ise(estimated, model.f), 3.0 * ise(known, model.f) + 0.01);
}

TEST(SeriesEstimate, CurveCsvHasTwoHundredOnePoints) {
  const auto s = build_scheme(100, 1);
  std::vector<double> theta(s.coefficient_count(), 0.0);
  theta[1] = 0.5;
  std::ostringstream os;
  write_curve_csv(os, oracle_estimate(theta, 1.0, s));
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  EXPECT_EQ(lines, 202);
}

}  // namespace
}  // namespace bshrink
