#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "bshrink/errors.hpp"
#include "bshrink/estimators.hpp"
#include "bshrink/io/csv.hpp"
#include "bshrink/io/scenario_json.hpp"
#include "bshrink/risk_eval.hpp"
#include "bshrink/sim_models/difficulty.hpp"
#include "bshrink/sim_models/rng.hpp"
#include "bshrink/sim_models/sampling.hpp"
#include "bshrink/sim_models/scenarios.hpp"

namespace bshrink {

inline constexpr const char* kVersion = "1.0.0";

/// Design-density class assumed by the fully data-driven estimator.
enum class DesignClass { analytic, sobolev };

[[nodiscard]] inline std::string to_string(DesignClass c) { return c == DesignClass::analytic ? "analytic" : "sobolev"; }

[[nodiscard]] inline DesignClass parse_design_class(const std::string& s) {
  if (s == "analytic") return DesignClass::analytic;
  if (s == "sobolev") return DesignClass::sobolev;
  throw ValidationError("unknown design class '" + s + "' (expected analytic or sobolev)");
}

struct ExperimentConfig {
  std::vector<std::string> scenarios = {"lambda1_g0", "lambda2_g0", "lambda3_g0"};
  std::vector<std::size_t> sample_sizes = {100, 200, 400};
  bool additive_variants = false;  // also run S on g1, g2, g3 (R4..R6)
  std::size_t replications = 200;
  std::uint64_t seed = 20130411;
  std::size_t workers = 1;
  std::string output_dir;          // empty: no files written
  std::size_t ise_nodes = 512;
  bool no_split = true;
  DesignClass design_class = DesignClass::analytic;
  EstimatorOptions options;        // c_lower/c_upper of 0 select per-scenario defaults

  void validate() const {
    if (replications < 1) throw ValidationError("replications must be >= 1");
    if (workers < 1) throw ValidationError("workers must be >= 1");
    if (scenarios.empty()) throw ValidationError("no scenarios configured");
    if (sample_sizes.empty()) throw ValidationError("no sample sizes configured");
    if (ise_nodes < 2) throw ValidationError("ise_nodes must be >= 2");
    for (const auto& s : scenarios) {
      const auto spec = find_scenario(s);
      if (spec.additive != AdditiveChoice::zero && additive_variants) {
        throw ValidationError("additive variants need a base scenario with g = 0, got '" + s + "'");
      }
    }
    for (std::size_t n : sample_sizes) {
      if (n < 2) throw ValidationError("sample sizes must be >= 2");
      if (!no_split && n < 30) throw ValidationError("sample sizes must be >= 30 with sample splitting");
    }
    if (options.c_lower < 0.0 || options.c_upper < 0.0) throw ValidationError("c_lower and c_upper must be >= 0");
    if (options.c_lower > 0.0 && options.c_upper > 0.0 && !(options.c_lower < options.c_upper)) {
      throw ValidationError("c_lower must be below c_upper");
    }
    if (!(options.C2 >= 1.0)) throw ValidationError("C2 must be >= 1");
    if (options.density_floor < 0.0) throw ValidationError("density_floor must be >= 0");
  }
};

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"scenarios", c.scenarios},
                     {"n", c.sample_sizes},
                     {"additive_variants", c.additive_variants},
                     {"replications", c.replications},
                     {"seed", c.seed},
                     {"workers", c.workers},
                     {"output_dir", c.output_dir},
                     {"ise_nodes", c.ise_nodes},
                     {"no_split", c.no_split},
                     {"design_class", to_string(c.design_class)},
                     {"estimator",
                      {{"c_lower", c.options.c_lower},
                       {"c_upper", c.options.c_upper},
                       {"C2", c.options.C2},
                       {"project_d_hat", c.options.project_d_hat},
                       {"block_energy", to_string(c.options.block_energy)},
                       {"shrink_additive", c.options.shrink_additive},
                       {"density_floor", c.options.density_floor},
                       {"e_known_design", c.options.e_known_design}}}};
}

/// Reads a configuration; absent keys keep their defaults. Unknown keys are rejected.
inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  try {
    static const std::vector<std::string> known = {"scenarios", "lambda",   "n",        "additive_variants",
                                                   "replications", "seed", "workers",  "output_dir",
                                                   "ise_nodes", "no_split", "design_class", "estimator"};
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
        throw ValidationError("unknown configuration key '" + it.key() + "'");
      }
    }
    if (j.contains("scenarios")) c.scenarios = j.at("scenarios").get<std::vector<std::string>>();
    if (j.contains("lambda")) {
      c.scenarios.clear();
      for (double l : j.at("lambda").get<std::vector<double>>()) c.scenarios.push_back(scenario_name(l, AdditiveChoice::zero));
    }
    if (j.contains("n")) c.sample_sizes = j.at("n").get<std::vector<std::size_t>>();
    if (j.contains("additive_variants")) c.additive_variants = j.at("additive_variants").get<bool>();
    if (j.contains("replications")) c.replications = j.at("replications").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<std::size_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("ise_nodes")) c.ise_nodes = j.at("ise_nodes").get<std::size_t>();
    if (j.contains("no_split")) c.no_split = j.at("no_split").get<bool>();
    if (j.contains("design_class")) c.design_class = parse_design_class(j.at("design_class").get<std::string>());
    if (j.contains("estimator")) {
      const auto& e = j.at("estimator");
      auto& o = c.options;
      if (e.contains("c_lower")) o.c_lower = e.at("c_lower").get<double>();
      if (e.contains("c_upper")) o.c_upper = e.at("c_upper").get<double>();
      if (e.contains("C2")) o.C2 = e.at("C2").get<double>();
      if (e.contains("project_d_hat")) o.project_d_hat = e.at("project_d_hat").get<bool>();
      if (e.contains("block_energy")) o.block_energy = parse_block_energy(e.at("block_energy").get<std::string>());
      if (e.contains("shrink_additive")) o.shrink_additive = e.at("shrink_additive").get<bool>();
      if (e.contains("density_floor")) o.density_floor = e.at("density_floor").get<double>();
      if (e.contains("e_known_design")) o.e_known_design = e.at("e_known_design").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid configuration: ") + e.what());
  }
}

[[nodiscard]] inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open configuration '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("configuration '" + path + "' is not valid JSON: " + e.what());
  }
  return j.get<ExperimentConfig>();
}

/// Results of one (scenario, n) cell.
struct CellResult {
  std::string scenario;
  double lambda = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;  // inflated sample size of the Em estimator
  DifficultyCoefficients difficulty;
  std::map<std::string, RiskRecord> records;
  RatioTable ratios;
  GuardLog guards;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  double wall_clock_seconds = 0.0;
};

namespace detail {

[[nodiscard]] inline Setting d_setting(const ExperimentConfig& c) { return c.no_split ? Setting::no_split_D : Setting::s1; }

[[nodiscard]] inline Setting s_setting(const ExperimentConfig& c) {
  if (c.design_class == DesignClass::sobolev) return Setting::s5_sobolev;
  return c.no_split ? Setting::no_split_S : Setting::s4_analytic;
}

struct ReplicationResult {
  std::map<std::string, double> ise;
  GuardLog guards;
};

[[nodiscard]] inline ScenarioSpec with_additive(ScenarioSpec spec, AdditiveChoice g) {
  spec.additive = g;
  spec.name = spec.name + "+g" + std::to_string(static_cast<int>(g));
  return spec;
}

/// Runs fn(r) for r in [0, count) on `workers` threads; results are stored by
/// index, so the outcome does not depend on scheduling.
template <class Fn>
inline void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t r = next.fetch_add(1);
        if (r >= count) return;
        try {
          fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Runs every configured cell. Replication r of a cell uses the dataset seed
/// derive_seed(master, {scenario index, n, r}); D, S and En share that
/// dataset and Em uses its extension to m observations. The S_s estimators
/// reuse the same seed, so their covariates and errors coincide with the base
/// dataset and only the additive component differs.
template <class Progress>
[[nodiscard]] inline ExperimentReport run_table1(const ExperimentConfig& config, Progress&& progress) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;

  for (std::size_t si = 0; si < config.scenarios.size(); ++si) {
    const auto spec = find_scenario(config.scenarios[si]);
    const auto model = make_scenario(spec);
    std::vector<RegressionModel> variants;
    if (config.additive_variants) {
      for (auto g : {AdditiveChoice::g1, AdditiveChoice::g2, AdditiveChoice::g3}) {
        variants.push_back(make_scenario(detail::with_additive(spec, g)));
      }
    }
    const auto difficulty = coefficient_of_difficulty(model);
    const auto truth = model.f;

    for (std::size_t n : config.sample_sizes) {
      CellResult cell;
      cell.scenario = spec.name;
      cell.lambda = spec.lambda;
      cell.n = n;
      cell.m = std::max(n, inflated_sample_size(n, difficulty));
      cell.difficulty = difficulty;

      std::vector<detail::ReplicationResult> reps(config.replications);
      detail::parallel_for(config.replications, config.workers, [&](std::size_t r) {
        auto& out = reps[r];
        const auto seed = derive_seed(config.seed, {si, n, r});
        const auto extended = sample_dataset(model, cell.m, seed);
        const auto data = extended.prefix(n);
        auto fit = [&](const RegressionModel& mdl, const SampledDataset& d, Setting s) {
          auto est = fit_estimate(inputs_for_model(mdl, d, s, !config.no_split, config.options));
          out.guards.merge(est.guards);
          return ise(est, mdl.f, config.ise_nodes);
        };
        out.ise[tags::D] = fit(model, data, detail::d_setting(config));
        out.ise[tags::S] = fit(model, data, detail::s_setting(config));
        out.ise[tags::En] = fit(model, data, Setting::e_baseline);
        out.ise[tags::Em] = fit(model, extended, Setting::e_baseline);
        const std::string extra[3] = {tags::S1, tags::S2, tags::S3};
        for (std::size_t s = 0; s < variants.size(); ++s) {
          const auto vdata = sample_dataset(variants[s], n, seed);
          out.ise[extra[s]] = fit(variants[s], vdata, detail::s_setting(config));
        }
      });

      for (std::size_t r = 0; r < reps.size(); ++r) {
        for (const auto& [tag, v] : reps[r].ise) {
          auto& rec = cell.records[tag];
          rec.tag = tag;
          rec.ise.push_back(v);
        }
        cell.guards.merge(reps[r].guards);
      }
      cell.ratios = ratio_table(cell.records);
      progress(cell);
      report.cells.push_back(std::move(cell));
    }
  }
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

[[nodiscard]] inline ExperimentReport run_table1(const ExperimentConfig& config) {
  return run_table1(config, [](const CellResult&) {});
}

/// Replication counts below this are flagged as noisy in the text table and JSON.
inline constexpr std::size_t kNoisyReplications = 30;

/// One row per estimator and cell: scenario,n,estimator,aise,se,R1..R6.
/// Ratios are repeated on every row of their cell; missing ratios are empty.
inline void write_report_csv(std::ostream& os, const ExperimentReport& rep) {
  os << "scenario,n,estimator,aise,se,R1,R2,R3,R4,R5,R6\n";
  for (const auto& cell : rep.cells) {
    for (const auto& [tag, rec] : cell.records) {
      os << cell.scenario << ',' << cell.n << ',' << tag << ',' << format_double(rec.aise()) << ','
         << format_double(rec.se());
      for (const auto& r : cell.ratios.r) {
        os << ',';
        if (r) os << format_double(r->value);
      }
      os << '\n';
    }
  }
}

inline void to_json(nlohmann::json& j, const CellResult& c) {
  j = nlohmann::json{{"scenario", c.scenario},
                     {"lambda", c.lambda},
                     {"n", c.n},
                     {"m", c.m},
                     {"d", c.difficulty.d},
                     {"d2", c.difficulty.d2},
                     {"records", nlohmann::json::array()},
                     {"ratios", c.ratios},
                     {"guard_events", c.guards}};
  for (const auto& [tag, rec] : c.records) j["records"].push_back(rec);
}

inline void to_json(nlohmann::json& j, const ExperimentReport& r) {
  j = nlohmann::json{{"version", kVersion},
                     {"config", r.config},
                     {"noisy", r.config.replications < kNoisyReplications},
                     {"wall_clock_seconds", r.wall_clock_seconds},
                     {"cells", r.cells}};
}

/// Human-readable table with one block per scenario: m, then R1..R3 (and
/// R4..R6 when present) with standard errors, one column per n.
inline void write_report_text(std::ostream& os, const ExperimentReport& rep) {
  std::map<std::string, std::vector<const CellResult*>> by_scenario;
  std::vector<std::string> order;
  for (const auto& c : rep.cells) {
    if (!by_scenario.count(c.scenario)) order.push_back(c.scenario);
    by_scenario[c.scenario].push_back(&c);
  }
  auto fmt = [](double v, int prec) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
  };
  os << "replications: " << rep.config.replications;
  if (rep.config.replications < kNoisyReplications) os << " (noisy: ratios are indicative only)";
  os << "\n";
  for (const auto& name : order) {
    const auto& cells = by_scenario[name];
    os << "\n" << name << " (lambda = " << fmt(cells.front()->lambda, 2) << ")\n";
    os << std::left << std::setw(10) << "n";
    for (const auto* c : cells) os << std::setw(26) << c->n;
    os << "\n" << std::setw(10) << "m";
    for (const auto* c : cells) os << std::setw(26) << c->m;
    os << "\n";
    for (std::size_t k = 0; k < 6; ++k) {
      if (!cells.front()->ratios.r[k]) continue;
      os << std::setw(10) << ("R" + std::to_string(k + 1));
      for (const auto* c : cells) {
        const auto& r = c->ratios.r[k];
        os << std::setw(26) << (r ? fmt(r->value, 3) + " (se " + fmt(r->se, 3) + ")" : std::string("-"));
      }
      os << "\n";
    }
  }
}

/// Writes table1.csv, table1.json and table1.txt into config.output_dir,
/// creating the directory if needed.
inline void write_report_files(const ExperimentReport& rep) {
  const auto& dir = rep.config.output_dir;
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create '" + dir + "': " + ec.message());
  auto open = [&](const std::string& name) {
    std::ofstream os(dir + "/" + name, std::ios::binary);
    if (!os) throw ValidationError("cannot write '" + dir + "/" + name + "'");
    return os;
  };
  {
    auto os = open("table1.csv");
    write_report_csv(os, rep);
  }
  {
    auto os = open("table1.json");
    os << nlohmann::json(rep).dump(2) << '\n';
  }
  {
    auto os = open("table1.txt");
    write_report_text(os, rep);
  }
}

}  // namespace bshrink
