#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bshrink/bshrink.hpp"

namespace {

using namespace bshrink;

bool verbose() {
  const char* v = std::getenv("BSHRINK_VERBOSE");
  return v != nullptr && std::string(v) != "0" && std::string(v) != "";
}

/// Scenario selection shared by several subcommands.
struct ScenarioArgs {
  std::string scenario;
  std::string scenario_file;
  std::optional<double> lambda;
  std::string g = "0";

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario, "built-in scenario name");
    app->add_option("--scenario-file", scenario_file, "JSON scenario definition");
    app->add_option("--lambda", lambda, "scale exponent of a grid scenario");
    app->add_option("--g", g, "additive component of a grid scenario: 0, 1, 2 or 3");
  }

  [[nodiscard]] ScenarioSpec spec() const {
    if (!scenario_file.empty()) {
      std::ifstream is(scenario_file);
      if (!is) throw ValidationError("cannot open scenario file '" + scenario_file + "'");
      try {
        return nlohmann::json::parse(is).get<ScenarioSpec>();
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("scenario file '" + scenario_file + "': " + e.what());
      }
    }
    if (!scenario.empty()) return find_scenario(scenario);
    if (lambda) return find_scenario(scenario_name(*lambda, parse_g(g)));
    throw ValidationError("select a scenario with --scenario, --scenario-file or --lambda");
  }

  static AdditiveChoice parse_g(const std::string& s) {
    if (s == "0" || s == "zero") return AdditiveChoice::zero;
    if (s == "1" || s == "g1") return AdditiveChoice::g1;
    if (s == "2" || s == "g2") return AdditiveChoice::g2;
    if (s == "3" || s == "g3") return AdditiveChoice::g3;
    throw ValidationError("unknown additive component '" + s + "'");
  }
};

/// Estimator options shared by fit and table1.
struct OptionArgs {
  std::optional<double> c_lower, c_upper, C2, density_floor;
  bool project_d_hat = false;
  std::string block_energy;
  bool no_additive_shrinkage = false;
  bool estimated_e_design = false;

  void add(CLI::App* app) {
    app->add_option("--c-lower", c_lower, "lower bound c_* of sigma^2");
    app->add_option("--c-upper", c_upper, "upper bound c^* of sigma^2");
    app->add_option("--C2", C2, "constant of the d_hat projection interval");
    app->add_flag("--project-d-hat", project_d_hat, "clamp d_hat into [(C2 b)^-1/4, (C2 b)^1/4]");
    app->add_option("--block-energy", block_energy, "u_statistic or plug_in");
    app->add_flag("--no-additive-shrinkage", no_additive_shrinkage, "use the raw additive-component projection");
    app->add_option("--density-floor", density_floor, "lower clamp of projection density estimates");
    app->add_flag("--estimated-e-design", estimated_e_design, "E-baseline estimates the design density");
  }

  void apply(EstimatorOptions& o) const {
    if (c_lower) o.c_lower = *c_lower;
    if (c_upper) o.c_upper = *c_upper;
    if (C2) o.C2 = *C2;
    if (density_floor) o.density_floor = *density_floor;
    if (project_d_hat) o.project_d_hat = true;
    if (!block_energy.empty()) o.block_energy = parse_block_energy(block_energy);
    if (no_additive_shrinkage) o.shrink_additive = false;
    if (estimated_e_design) o.e_known_design = false;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  return os;
}

/// Short estimator names map to settings; full setting names are accepted too.
Setting resolve_tag(const std::string& tag, bool split, DesignClass cls) {
  if (tag == "D") return split ? Setting::s1 : Setting::no_split_D;
  if (tag == "S") {
    if (cls == DesignClass::sobolev) return Setting::s5_sobolev;
    return split ? Setting::s4_analytic : Setting::no_split_S;
  }
  if (tag == "E" || tag == "En") return Setting::e_baseline;
  return parse_setting(tag);
}

int run(int argc, char** argv) {
  CLI::App app{"Blockwise-shrinkage series regression with heteroscedastic errors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw a dataset from a scenario and write it as CSV");
  ScenarioArgs sim_scn;
  sim_scn.add(sim);
  std::size_t sim_n = 0;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  sim->add_option("--n", sim_n, "sample size")->required();
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "output CSV path")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit an estimator to a CSV dataset");
  ScenarioArgs fit_scn;
  fit_scn.add(fit);
  OptionArgs fit_opt;
  fit_opt.add(fit);
  std::string fit_data, fit_tag, fit_out, fit_theta, fit_flag = "analytic";
  bool fit_split = false;
  std::optional<std::size_t> fit_n;
  std::optional<double> fit_d;
  fit->add_option("--data", fit_data, "dataset CSV (x,z1..zD,y)");
  fit->add_option("--estimator", fit_tag, "D, S, En, oracle, s1, s2, s3, s4_analytic, s5_sobolev, ...")->required();
  fit->add_option("--out", fit_out, "output prefix: writes <prefix>.json and <prefix>_curve.csv")->required();
  fit->add_option("--theta", fit_theta, "JSON array of true coefficients (dataset-free oracle)");
  fit->add_option("--n", fit_n, "sample size for the dataset-free oracle");
  fit->add_option("--d", fit_d, "coefficient of difficulty for the dataset-free oracle");
  fit->add_flag("--split,!--no-split", fit_split, "use sample splitting (default: no splitting)");
  fit->add_option("--flag", fit_flag, "design class of the S estimator: analytic or sobolev");

  // table1
  auto* tab = app.add_subcommand("table1", "Monte Carlo comparison of D, S, En and Em");
  OptionArgs tab_opt;
  tab_opt.add(tab);
  std::string tab_config, tab_out, tab_g, tab_flag;
  std::vector<double> tab_lambda;
  std::vector<std::string> tab_scenarios;
  std::vector<std::size_t> tab_n;
  std::optional<std::size_t> tab_reps, tab_workers;
  std::optional<std::uint64_t> tab_seed;
  std::optional<bool> tab_split;
  tab->add_option("--config", tab_config, "JSON experiment configuration");
  tab->add_option("--lambda", tab_lambda, "scale exponents (comma separated)")->delimiter(',');
  tab->add_option("--scenario", tab_scenarios, "built-in base scenarios (comma separated)")->delimiter(',');
  tab->add_option("--n", tab_n, "sample sizes (comma separated)")->delimiter(',');
  tab->add_option("--reps", tab_reps, "replications per cell");
  tab->add_option("--seed", tab_seed, "master seed");
  tab->add_option("--workers", tab_workers, "worker threads");
  tab->add_option("--out", tab_out, "output directory for table1.csv, table1.json, table1.txt");
  tab->add_option("--g", tab_g, "zero (R1..R3 only) or all (adds R4..R6)");
  tab->add_flag("--split,!--no-split", tab_split, "use sample splitting (default: no splitting)");
  tab->add_option("--flag", tab_flag, "design class of the S estimator: analytic or sobolev");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "asymptotic minimax lower bounds");
  ScenarioArgs bnd_scn;
  bnd_scn.add(bnd);
  double bnd_alpha = 1.0, bnd_Q = 1.0;
  std::vector<std::size_t> bnd_n;
  std::optional<double> bnd_pivot;
  std::string bnd_out;
  bnd->add_option("--alpha", bnd_alpha, "Sobolev smoothness");
  bnd->add_option("--Q", bnd_Q, "Sobolev radius");
  bnd->add_option("--n", bnd_n, "sample sizes (comma separated)")->delimiter(',')->required();
  bnd->add_option("--pivot", bnd_pivot, "constant pivot f0 for Bernoulli/Poisson scenarios");
  bnd->add_option("--out", bnd_out, "output CSV path (default: stdout)");

  // scheme
  auto* sch = app.add_subcommand("scheme", "print the block scheme for a sample size");
  std::size_t sch_n = 0, sch_div = 1;
  sch->add_option("--n", sch_n, "sample size")->required();
  sch->add_option("--divisor", sch_div, "split divisor: 1, 7 or 21");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sim->parsed()) {
    const auto spec = sim_scn.spec();
    const auto data = sample_dataset(make_scenario(spec), sim_n, sim_seed);
    auto os = open_out(sim_out);
    write_dataset_csv(os, data);
    auto meta = open_out(sim_out + ".json");
    meta << nlohmann::json{{"scenario", spec.name}, {"n", sim_n}, {"seed", sim_seed}}.dump(2) << '\n';
    if (verbose()) std::cerr << "wrote " << sim_n << " rows of " << spec.name << " (seed " << sim_seed << ")\n";
    return 0;
  }

  if (fit->parsed()) {
    const auto cls = parse_design_class(fit_flag);
    const Setting setting = resolve_tag(fit_tag, fit_split, cls);
    EstimatorOptions opts;
    fit_opt.apply(opts);
    SeriesEstimate est;
    std::optional<ResponseKind> response;
    if (!fit_theta.empty()) {
      if (setting != Setting::oracle) throw ValidationError("--theta is only used with the oracle estimator");
      if (!fit_n || !fit_d) throw ValidationError("the dataset-free oracle needs --n and --d");
      std::ifstream is(fit_theta);
      if (!is) throw ValidationError("cannot open '" + fit_theta + "'");
      std::vector<double> theta;
      try {
        theta = nlohmann::json::parse(is).get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("theta file: " + std::string(e.what()));
      }
      const auto scheme = build_scheme(*fit_n, 1);
      theta.resize(std::max(theta.size(), scheme.coefficient_count()), 0.0);
      est = oracle_estimate(theta, *fit_d, scheme);
    } else {
      if (fit_data.empty()) throw ValidationError("--data is required unless --theta is given");
      const auto data = read_dataset_csv(fit_data);
      const auto model = make_scenario(fit_scn.spec());
      if (model.aux_dim() != data.aux_dim) throw ValidationError("dataset and scenario differ in covariate dimension");
      response = model.response;
      est = fit_estimate(inputs_for_model(model, data, setting, fit_split, opts));
    }
    {
      auto os = open_out(fit_out + ".json");
      os << nlohmann::json(est).dump(2) << '\n';
    }
    auto os = open_out(fit_out + "_curve.csv");
    if (response && *response != ResponseKind::continuous) {
      const auto clamped = bona_fide_clamp(est, *response);
      os << "x,f_hat\n";
      for (std::size_t i = 0; i < 201; ++i) {
        const double x = static_cast<double>(i) / 200.0;
        os << format_double(x) << ',' << format_double(clamped.interpolate(&x)) << '\n';
      }
    } else {
      write_curve_csv(os, est);
    }
    if (verbose()) std::cerr << "fitted " << est.tag << " with " << est.guards.total() << " guard events\n";
    return 0;
  }

  if (tab->parsed()) {
    ExperimentConfig cfg = tab_config.empty() ? ExperimentConfig{} : load_config(tab_config);
    if (!tab_scenarios.empty()) cfg.scenarios = tab_scenarios;
    if (!tab_lambda.empty()) {
      cfg.scenarios.clear();
      for (double l : tab_lambda) cfg.scenarios.push_back(scenario_name(l, AdditiveChoice::zero));
    }
    if (!tab_n.empty()) cfg.sample_sizes = tab_n;
    if (tab_reps) cfg.replications = *tab_reps;
    if (tab_seed) cfg.seed = *tab_seed;
    if (tab_workers) cfg.workers = *tab_workers;
    if (!tab_out.empty()) cfg.output_dir = tab_out;
    if (!tab_g.empty()) {
      if (tab_g != "zero" && tab_g != "all") throw ValidationError("--g must be zero or all");
      cfg.additive_variants = tab_g == "all";
    }
    if (tab_split) cfg.no_split = !*tab_split;
    if (!tab_flag.empty()) cfg.design_class = parse_design_class(tab_flag);
    tab_opt.apply(cfg.options);
    const bool loud = verbose();
    const auto report = run_table1(cfg, [&](const CellResult& c) {
      if (loud) std::cerr << "done " << c.scenario << " n=" << c.n << '\n';
    });
    write_report_files(report);
    write_report_text(std::cout, report);
    return 0;
  }

  if (bnd->parsed()) {
    const auto model = make_scenario(bnd_scn.spec());
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!bnd_out.empty()) {
      file = open_out(bnd_out);
      os = &file;
    }
    *os << "n,d,bound\n";
    for (std::size_t n : bnd_n) {
      LowerBoundValue b;
      if (model.response == ResponseKind::continuous) {
        if (bnd_pivot) throw ValidationError("--pivot is only used for Bernoulli/Poisson scenarios");
        b = lower_bound(model, bnd_alpha, bnd_Q, n);
      } else {
        if (!bnd_pivot) throw ValidationError("Bernoulli/Poisson scenarios need --pivot");
        b = lower_bound(model, GridFunction::constant({model.f.nodes(0)}, *bnd_pivot), bnd_alpha, bnd_Q, n);
      }
      *os << n << ',' << format_double(b.d) << ',' << format_double(b.value) << '\n';
    }
    return 0;
  }

  if (sch->parsed()) {
    std::cout << nlohmann::json(build_scheme(sch_n, sch_div)).dump(2) << '\n';
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bshrink::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const bshrink::GuardError& e) {
    std::cerr << "guard failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
