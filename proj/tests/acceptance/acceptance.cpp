// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bshrink/bshrink.hpp"

namespace {

using namespace bshrink;
namespace fs = std::filesystem;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct MeanSe {
  double mean = 0.0, se = 0.0, var = 0.0;
};

MeanSe summarize(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  MeanSe out;
  for (double x : v) out.mean += x;
  out.mean /= n;
  for (double x : v) out.var += (x - out.mean) * (x - out.mean);
  out.var /= n - 1.0;
  out.se = std::sqrt(out.var / n);
  return out;
}

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// 1. Inflated sample sizes of the comparison table.
Verdict m_row() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t table[3][4] = {{54, 108, 216, 432}, {69, 138, 276, 552}, {100, 201, 403, 806}};
  const std::size_t ns[4] = {50, 100, 200, 400};
  int within = 0, exact = 0;
  std::string got;
  for (int l = 1; l <= 3; ++l) {
    const auto model = make_scenario(find_scenario(scenario_name(l, AdditiveChoice::zero)));
    const auto c = coefficient_of_difficulty(model);
    for (int k = 0; k < 4; ++k) {
      const auto m = inflated_sample_size(ns[k], c);
      const long diff = static_cast<long>(m) - static_cast<long>(table[l - 1][k]);
      if (std::abs(diff) <= 2) ++within;
      if (diff == 0) ++exact;
      got += (got.empty() ? "" : " ") + std::to_string(m);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {within == 12 && exact >= 10 && secs < 1.0, std::to_string(within) + "/12 within 2, " +
                                                         std::to_string(exact) + " exact, " + fmt(secs) +
                                                         " s; m = " + got};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + BSHRINK_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Table1Runs {
  bool ok = false;
  fs::path first, second;
  std::string error;
};

// Full default grid (lambda 1..3, n 100/200/400, R=200) through the CLI, once
// with one worker and once with four.
Table1Runs run_full_grid(const fs::path& root) {
  Table1Runs runs;
  runs.first = root / "workers1";
  runs.second = root / "workers4";
  if (run_cli("table1 --reps 200 --workers 1 --out \"" + runs.first.string() + "\"") != 0) {
    runs.error = "table1 with one worker failed";
    return runs;
  }
  if (run_cli("table1 --reps 200 --workers 4 --out \"" + runs.second.string() + "\"") != 0) {
    runs.error = "table1 with four workers failed";
    return runs;
  }
  runs.ok = true;
  return runs;
}

// 2. Ratio trends at desk scale.
Verdict ratio_trends(const Table1Runs& runs) {
  if (!runs.ok) return {false, runs.error};
  const auto j = nlohmann::json::parse(slurp(runs.first / "table1.json"));
  bool pass = true;
  std::map<double, double> r2_at_200;
  std::ostringstream detail;
  for (const auto& cell : j.at("cells")) {
    const double lambda = cell.at("lambda").get<double>();
    const auto n = cell.at("n").get<std::size_t>();
    const auto& r = cell.at("ratios");
    const double r1 = r.at("R1").at("value").get<double>();
    const double r2 = r.at("R2").at("value").get<double>();
    const double r3 = r.at("R3").at("value").get<double>();
    if (lambda >= 2.0 && !(r2 > 1.0)) pass = false;
    if (n >= 100 && !(r1 >= 0.9 && r1 <= 1.3)) pass = false;
    if (!(r3 >= 0.7 && r3 <= 1.3)) pass = false;
    if (n == 200) r2_at_200[lambda] = r2;
    detail << " l" << lambda << "/n" << n << "=" << fmt(r1, 2) << "," << fmt(r2, 2) << "," << fmt(r3, 2);
  }
  double prev = -1.0;
  for (const auto& [lambda, r2] : r2_at_200) {
    if (!(r2 > prev)) pass = false;
    prev = r2;
  }
  if (r2_at_200.size() != 3) pass = false;
  return {pass, "R1,R2,R3:" + detail.str()};
}

// 3. Additive-component robustness.
Verdict additive_robustness() {
  ExperimentConfig c;
  c.scenarios = {"lambda1_g0"};
  c.sample_sizes = {400};
  c.replications = 200;
  c.additive_variants = true;
  const auto rep = run_table1(c);
  bool pass = true;
  std::string detail;
  for (int s = 3; s < 6; ++s) {
    const auto& r = rep.cells.at(0).ratios.r[s];
    if (!r || !(r->value >= 0.95 && r->value <= 1.25)) pass = false;
    detail += " R" + std::to_string(s + 1) + "=" + (r ? fmt(r->value) + "(" + fmt(r->se) + ")" : "missing");
  }
  return {pass, "n=400, lambda=1, R=200:" + detail};
}

// 4. Unbiasedness of the block-energy statistic.
Verdict energy_unbiasedness() {
  struct Combo {
    const char* scenario;
    std::size_t block;
  };
  const Combo combos[] = {{"lambda1_g0", 0}, {"lambda1_g0", 5}, {"lambda2_g1", 2},
                          {"lambda2_g1", 5}, {"lambda3_g2", 0}, {"lambda3_g2", 2}};
  const std::size_t m = 200, R = 500;
  bool pass = true;
  std::string detail;
  EstimatorOptions opts;
  opts.block_energy = BlockEnergy::u_statistic;
  for (std::size_t c = 0; c < 6; ++c) {
    const auto model = make_scenario(find_scenario(combos[c].scenario));
    const auto scheme = build_scheme(m, 1);
    const auto theta = true_coefficients(model, scheme.coefficient_count() - 1);
    const auto& B = scheme.blocks.at(combos[c].block);
    double truth = 0.0;
    for (std::size_t j = B.first; j <= B.last(); ++j) truth += theta[j] * theta[j];
    truth /= static_cast<double>(B.length);
    std::vector<double> draws;
    for (std::size_t r = 0; r < R; ++r) {
      const auto data = sample_dataset(model, m, derive_seed(4004, {c, r}));
      const auto stats = shrinkage_statistics(inputs_for_model(model, data, Setting::no_split_D, false, opts));
      draws.push_back(stats.block_energy.at(combos[c].block));
    }
    const auto s = summarize(draws);
    const double z = (s.mean - truth) / s.se;
    if (!(std::abs(z) <= 4.0)) pass = false;
    detail += std::string(" ") + combos[c].scenario + "/k" + std::to_string(combos[c].block) + ": z=" + fmt(z, 2);
  }
  return {pass, "m=200, R=500:" + detail};
}

// 5. Range preservation, constant fixed point and linearity of the Fejer approximation.
Verdict fejer_properties() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  std::uniform_int_distribution<int> order(2, 12);
  double worst_range = 0.0;
  for (int t = 0; t < 100; ++t) {
    const bool two_d = t % 2 == 1;
    const std::vector<std::size_t> shape = two_d ? std::vector<std::size_t>{32, 32} : std::vector<std::size_t>{128};
    std::size_t size = 1;
    for (auto s : shape) size *= s;
    std::vector<double> v(size);
    for (auto& x : v) x = u(rng);
    const GridFunction f(shape, v);
    const auto a = fejer_approximation(f, static_cast<std::size_t>(order(rng)));
    worst_range = std::max({worst_range, f.min_value() - a.min_value(), a.max_value() - f.max_value()});
  }
  const auto constant = fejer_approximation(GridFunction::constant({64, 64}, 3.25), 9);
  double worst_const = 0.0;
  for (double v : constant.values()) worst_const = std::max(worst_const, std::abs(v - 3.25));
  std::vector<double> a(48 * 48), b(48 * 48);
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  for (auto& x : a) x = w(rng);
  for (auto& x : b) x = w(rng);
  const GridFunction fa({48, 48}, a), fb({48, 48}, b);
  const auto lhs = fejer_approximation(fa.combine(fb, [](double x, double y) { return 1.5 * x - 0.7 * y; }), 8);
  const auto ra = fejer_approximation(fa, 8), rb = fejer_approximation(fb, 8);
  double worst_lin = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    worst_lin = std::max(worst_lin, std::abs(lhs.values()[i] - (1.5 * ra.values()[i] - 0.7 * rb.values()[i])));
  }
  const bool pass = worst_range <= 1e-6 && worst_const <= 1e-8 && worst_lin <= 1e-10;
  char buf[160];
  std::snprintf(buf, sizeof buf, "range excess %.2e, constant error %.2e, linearity error %.2e", std::max(worst_range, 0.0),
                worst_const, worst_lin);
  return {pass, buf};
}

// 6. Orthonormality of the cosine basis on 512 midpoint nodes.
Verdict gram_identity() {
  const std::size_t N = 512;
  double worst = 0.0;
  for (std::size_t j = 0; j <= 20; ++j) {
    for (std::size_t k = 0; k <= 20; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double x = GridFunction::node(i, N);
        s += cos_basis(j, x) * cos_basis(k, x);
      }
      worst = std::max(worst, std::abs(s / double(N) - (j == k ? 1.0 : 0.0)));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |G - I| = %.2e", worst);
  return {worst <= 1e-10, buf};
}

// 7. Variance of the efficiently weighted coefficient statistic.
Verdict variance_targeting() {
  const auto model = make_scenario(find_scenario("lambda1_g0"));
  const double d = coefficient_of_difficulty(model).d;
  const std::size_t n = 4000, R = 400;
  const std::size_t js[] = {1, 3, 6};
  std::vector<std::vector<double>> draws(3);
  for (std::size_t r = 0; r < R; ++r) {
    const auto data = sample_dataset(model, n, derive_seed(7007, {r}));
    const auto stats = shrinkage_statistics(inputs_for_model(model, data, Setting::no_split_D));
    for (int i = 0; i < 3; ++i) draws[i].push_back(stats.theta_hat.at(js[i]));
  }
  bool pass = std::abs(d - 1.58198) < 1e-4;
  std::string detail = "d=" + fmt(d, 5);
  for (int i = 0; i < 3; ++i) {
    const double nv = static_cast<double>(n) * summarize(draws[i]).var;
    if (!(std::abs(nv / d - 1.0) <= 0.25)) pass = false;
    detail += ", j=" + std::to_string(js[i]) + ": n*Var=" + fmt(nv);
  }
  return {pass, detail};
}

// 8. Oracle MISE rate from n=400 to n=1600.
Verdict oracle_rate() {
  ScenarioSpec spec = find_scenario("lambda1_g0");
  spec.name = "sobolev_power";
  spec.regression.kind = RegressionShape::Kind::cosine_series;
  const std::size_t J = 200;
  double sum = 0.0;
  for (std::size_t j = 1; j <= J; ++j) sum += std::pow(double(j), -1.2);
  const double C = std::sqrt(0.9 / (std::numbers::pi * std::numbers::pi * sum));
  spec.regression.coefficients.assign(J + 1, 0.0);
  spec.regression.coefficients[0] = 1.0;
  for (std::size_t j = 1; j <= J; ++j) spec.regression.coefficients[j] = C * std::pow(double(j), -1.6);
  const auto model = make_scenario(spec);
  auto mise = [&](std::size_t n) {
    std::vector<double> v;
    for (std::size_t r = 0; r < 300; ++r) {
      const auto data = sample_dataset(model, n, derive_seed(8008, {n, r}));
      v.push_back(ise(fit_estimate(inputs_for_model(model, data, Setting::oracle)), model.f));
    }
    return summarize(v);
  };
  const auto a = mise(400), b = mise(1600);
  const double ratio = a.mean / b.mean;
  return {ratio >= 1.8 && ratio <= 3.6, "MISE(400)=" + fmt(a.mean, 5) + ", MISE(1600)=" + fmt(b.mean, 5) +
                                            ", ratio=" + fmt(ratio)};
}

// 9. Conditional variance of discrete responses.
Verdict discrete_variance() {
  const std::size_t n = 1000000, bins = 8;
  bool pass = true;
  std::string detail;
  for (const char* name : {"bernoulli_demo", "poisson_demo"}) {
    const auto model = make_scenario(find_scenario(name));
    const auto data = sample_dataset(model, n, 9009);
    std::vector<std::vector<std::size_t>> members(bins * bins);
    for (std::size_t i = 0; i < n; ++i) {
      const auto bx = std::min<std::size_t>(bins - 1, static_cast<std::size_t>(data.x[i] * bins));
      const auto bz = std::min<std::size_t>(bins - 1, static_cast<std::size_t>(data.z[i] * bins));
      members[bx * bins + bz].push_back(i);
    }
    double worst = 0.0;
    for (const auto& idx : members) {
      const double nb = static_cast<double>(idx.size());
      double ym = 0.0, mu_m = 0.0, s2_m = 0.0;
      std::vector<double> mu(idx.size());
      for (std::size_t t = 0; t < idx.size(); ++t) {
        const std::size_t i = idx[t];
        const double point[2] = {data.x[i], data.z[i]};
        mu[t] = model.mean(point[0], point + 1);
        const double s = model.sigma.interpolate(point);
        ym += data.y[i];
        mu_m += mu[t];
        s2_m += s * s;
      }
      ym /= nb;
      mu_m /= nb;
      s2_m /= nb;
      double m2 = 0.0, m4 = 0.0, mu_var = 0.0;
      for (std::size_t t = 0; t < idx.size(); ++t) {
        const double e = data.y[idx[t]] - ym;
        m2 += e * e;
        m4 += e * e * e * e;
        mu_var += (mu[t] - mu_m) * (mu[t] - mu_m);
      }
      m2 /= nb - 1.0;
      m4 /= nb;
      mu_var /= nb;
      // Law of total variance within the bin.
      const double predicted = s2_m + mu_var;
      const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / nb);
      worst = std::max(worst, std::abs(m2 - predicted) / se);
    }
    if (!(worst <= 4.0)) pass = false;
    detail += std::string(" ") + name + ": max |z| = " + fmt(worst, 2) + " over " + std::to_string(bins * bins) +
              " bins;";
  }
  return {pass, "1e6 draws," + detail};
}

// 10. Worker count does not change the table output.
Verdict determinism(const Table1Runs& runs) {
  if (!runs.ok) return {false, runs.error};
  const auto a = slurp(runs.first / "table1.csv");
  const auto b = slurp(runs.second / "table1.csv");
  return {!a.empty() && a == b, "table1.csv with 1 and 4 workers: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const auto root = fs::temp_directory_path() / "bshrink_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Verdict()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << v.detail << " (" << fmt(secs, 1)
              << " s)" << std::endl;
  };

  report(1, "inflated sample sizes", m_row);
  Table1Runs runs;
  report(2, "ratio trends", [&] {
    runs = run_full_grid(root);
    return ratio_trends(runs);
  });
  report(3, "additive-component robustness", additive_robustness);
  report(4, "block-energy unbiasedness", energy_unbiasedness);
  report(5, "Fejer properties", fejer_properties);
  report(6, "basis orthonormality", gram_identity);
  report(7, "variance targeting", variance_targeting);
  report(8, "oracle rate", oracle_rate);
  report(9, "discrete-response variance", discrete_variance);
  report(10, "worker-count determinism", [&] { return determinism(runs); });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
