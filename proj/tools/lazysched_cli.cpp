// Command-line front end for the transmission-scheduling simulator.
//
// Subcommands:
//   lazy          basic-problem policy comparison (dp/etls/hasty/constant)
//   general       generalized-problem comparison (offline vs heuristic)
//   sweep         mean performance against a list of horizons
//   oracle-check  tiny-instance brute-force validation suites
//
// Outputs are CSV (optionally mirrored to JSON) and are byte-identical
// across reruns with the same config and seed, regardless of
// LAZYSCHED_THREADS.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lazysched/config_io.hpp"
#include "lazysched/csv.hpp"
#include "lazysched/errors.hpp"
#include "lazysched/experiment.hpp"
#include "lazysched/lazy_dp.hpp"
#include "lazysched/oracles.hpp"
#include "lazysched/rng.hpp"

namespace {

using namespace lazysched;

constexpr int kExitRuntimeFailure = 1;
constexpr int kExitConfigFailure = 2;

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  int realizations = 0;
  std::string out_path;
  bool json_mirror = false;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--seed", args.seed, "master RNG seed (overrides config)");
  cmd->add_option("--realizations", args.realizations,
                  "Monte-Carlo realization count (overrides config)");
  cmd->add_option("--out", args.out_path, "output CSV path")->required();
  cmd->add_flag("--json", args.json_mirror,
                "also write the rows as <out>.json");
}

CliConfig load_or_default(const CommonArgs& args, bool seed_given,
                          bool realizations_given) {
  CliConfig config = args.config_path.empty()
                         ? default_cli_config()
                         : load_cli_config(args.config_path);
  if (seed_given) config.spec.seed = args.seed;
  if (realizations_given) config.spec.realizations = args.realizations;
  return config;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

void write_json_mirror(const std::string& out_path, const nlohmann::json& rows) {
  write_file(out_path + ".json", rows.dump(2) + "\n");
}

// --- lazy ---------------------------------------------------------------

int cmd_lazy(const CommonArgs& args, bool seed_given, bool realizations_given) {
  const CliConfig config =
      load_or_default(args, seed_given, realizations_given);
  const std::vector<ResultRow> rows = run_lazy_experiment(config.spec);

  std::string csv =
      "realization_index,policy,total_energy_J,backlog_pct,delivered_bits\n";
  nlohmann::json mirror = nlohmann::json::array();
  for (const ResultRow& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "realization " << row.realization << " policy "
                << row.policy << " failed: " << row.error << "\n";
      continue;
    }
    csv += format_u64(row.realization);
    csv += ',';
    csv += row.policy;
    csv += ',';
    csv += format_double(row.metrics.total_energy);
    csv += ',';
    csv += format_double(row.metrics.backlog_percentage);
    csv += ',';
    csv += format_double(row.metrics.delivered_bits);
    csv += '\n';
    if (args.json_mirror)
      mirror.push_back({{"realization_index", row.realization},
                        {"policy", row.policy},
                        {"total_energy_J", row.metrics.total_energy},
                        {"backlog_pct", row.metrics.backlog_percentage},
                        {"delivered_bits", row.metrics.delivered_bits}});
  }
  write_file(args.out_path, csv);
  if (args.json_mirror) write_json_mirror(args.out_path, mirror);
  return 0;
}

// --- general ------------------------------------------------------------

std::string waterlevels_path(const std::string& out_path) {
  const std::size_t dot = out_path.find_last_of('.');
  const std::size_t slash = out_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return out_path + "_waterlevels";
  return out_path.substr(0, dot) + "_waterlevels" + out_path.substr(dot);
}

int cmd_general(const CommonArgs& args, bool seed_given,
                bool realizations_given, bool emit_waterlevels) {
  const CliConfig config =
      load_or_default(args, seed_given, realizations_given);
  std::vector<TraceRow> traces;
  const std::vector<ResultRow> rows = run_general_experiment(
      config.spec, emit_waterlevels ? &traces : nullptr);

  std::string csv =
      "realization_index,policy,delivered_bits,throughput_mbps,"
      "total_energy_units,energy_per_slot_units,backlog_pct\n";
  nlohmann::json mirror = nlohmann::json::array();
  for (const ResultRow& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "realization " << row.realization << " policy "
                << row.policy << " failed: " << row.error << "\n";
      continue;
    }
    csv += format_u64(row.realization);
    csv += ',';
    csv += row.policy;
    csv += ',';
    csv += format_double(row.metrics.delivered_bits);
    csv += ',';
    csv += format_double(row.metrics.avg_throughput_mbps);
    csv += ',';
    csv += format_double(row.metrics.total_energy);
    csv += ',';
    csv += format_double(row.metrics.energy_per_slot);
    csv += ',';
    csv += format_double(row.metrics.backlog_percentage);
    csv += '\n';
    if (args.json_mirror)
      mirror.push_back(
          {{"realization_index", row.realization},
           {"policy", row.policy},
           {"delivered_bits", row.metrics.delivered_bits},
           {"throughput_mbps", row.metrics.avg_throughput_mbps},
           {"total_energy_units", row.metrics.total_energy},
           {"energy_per_slot_units", row.metrics.energy_per_slot},
           {"backlog_pct", row.metrics.backlog_percentage}});
  }
  write_file(args.out_path, csv);
  if (args.json_mirror) write_json_mirror(args.out_path, mirror);

  if (emit_waterlevels) {
    std::string trace_csv =
        "realization_index,slot,policy,w,rho,rate,gain,arrival_bits,"
        "harvest\n";
    for (const TraceRow& t : traces) {
      trace_csv += format_u64(t.realization);
      trace_csv += ',';
      trace_csv += std::to_string(t.entry.slot);
      trace_csv += ',';
      trace_csv += t.policy;
      trace_csv += ',';
      trace_csv += format_double(t.entry.water_level);
      trace_csv += ',';
      trace_csv += format_double(t.entry.power);
      trace_csv += ',';
      trace_csv += format_double(t.entry.rate);
      trace_csv += ',';
      trace_csv += format_double(t.gain);
      trace_csv += ',';
      trace_csv += format_double(t.arrival_bits);
      trace_csv += ',';
      trace_csv += format_double(t.harvest);
      trace_csv += '\n';
    }
    write_file(waterlevels_path(args.out_path), trace_csv);
  }
  return 0;
}

// --- sweep --------------------------------------------------------------

int cmd_sweep(const CommonArgs& args, bool seed_given, bool realizations_given,
              const std::vector<int>& horizons) {
  const CliConfig config =
      load_or_default(args, seed_given, realizations_given);
  const std::vector<SweepRow> rows =
      run_sweep_experiment(config.spec, horizons);

  std::string csv =
      "horizon_slots,policy,mean_throughput_mbps,mean_energy_per_slot_units,"
      "realizations\n";
  nlohmann::json mirror = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    csv += std::to_string(row.horizon);
    csv += ',';
    csv += row.policy;
    csv += ',';
    csv += format_double(row.mean_throughput_mbps);
    csv += ',';
    csv += format_double(row.mean_energy_per_slot);
    csv += ',';
    csv += std::to_string(row.realizations);
    csv += '\n';
    if (args.json_mirror)
      mirror.push_back({{"horizon_slots", row.horizon},
                        {"policy", row.policy},
                        {"mean_throughput_mbps", row.mean_throughput_mbps},
                        {"mean_energy_per_slot_units", row.mean_energy_per_slot},
                        {"realizations", row.realizations}});
  }
  write_file(args.out_path, csv);
  if (args.json_mirror) write_json_mirror(args.out_path, mirror);
  return 0;
}

// --- oracle-check -------------------------------------------------------

bool check(bool passed, const std::string& name) {
  std::cout << (passed ? "[ok]   " : "[FAIL] ") << name << "\n";
  return passed;
}

int cmd_oracle_check(std::uint64_t seed) {
  bool all = true;

  // Lazy DP against decision-tree enumeration on random tiny instances.
  {
    bool passed = true;
    RngStream stream(seed, 0, 101);
    for (int trial = 0; trial < 10; ++trial) {
      SystemConfig cfg;
      cfg.horizon_slots = 1 + static_cast<int>(stream.next_u64() % 3);
      cfg.tau = 1.0 + 2.0 * stream.uniform01();
      cfg.rate_set = {2.0, 5.0};
      ArrivalChain chain;
      const double q0 = 0.1 + 0.8 * stream.uniform01();
      const double q1 = 0.1 + 0.8 * stream.uniform01();
      chain.transition = {{q0, 1.0 - q0}, {1.0 - q1, q1}};
      chain.lengths = {0.0, 3.0};
      chain.initial_distribution = {1.0, 0.0};
      auto dp = dp_solve(cfg, chain, 6.0);
      for (double b : {0.0, 2.0, 5.0}) {
        const double expect = lazy_brute_force_cost(cfg, chain, b, 1);
        const double got = dp.value_at(1, b, 1);
        if (std::abs(expect - got) > 1e-9) passed = false;
      }
    }
    all &= check(passed, "lazy dp matches decision-tree enumeration");
  }

  // Water-filling against the nondecreasing-level grid search.
  {
    bool passed = true;
    SystemConfig cfg;
    cfg.horizon_slots = 3;
    cfg.slot_seconds = 1.0;
    cfg.bandwidth_hz = 10.0;
    cfg.rate_set = {1.0};
    for (int trial = 0; trial < 10; ++trial) {
      RngStream stream(seed, trial + 1, 102);
      Realization r;
      const int n = 3;
      for (int k = 0; k < n; ++k) {
        r.arrivals.push_back(stream.bernoulli(0.7) ? 20.0 : 0.0);
        r.arrival_states.push_back(0);
        r.harvests.push_back(stream.bernoulli(0.5) ? 0.4 : 0.0);
        r.gains.push_back(stream.bernoulli(0.5) ? 3.0 : 1.5);
      }
      const OfflineResult offline = offline_schedule(r, cfg, 0.3, 0.0);
      double max_gain = 3.0, min_gain = 1.5;
      double seed_level = 0.3 + 0.4 * n + 1.0 / min_gain;
      std::vector<double> levels;
      const int grid = 30;
      for (int k = 0; k < grid; ++k)
        levels.push_back(seed_level * k / (grid - 1));
      const double step = seed_level / (grid - 1);
      const double tp_bound = grid_throughput_bound(cfg, step, max_gain, n);
      const GridSearchResult best =
          grid_search_oracle(r, cfg, levels, 0.3, 0.0, tp_bound);
      if (std::abs(best.best_throughput - offline.metrics.delivered_bits) >
          tp_bound + 1e-6)
        passed = false;
    }
    all &= check(passed, "water-filling matches grid-search oracle");
  }

  // Generalized DP against the grid oracle on a deterministic instance.
  {
    SystemConfig cfg;
    cfg.horizon_slots = 2;
    cfg.slot_seconds = 1.0;
    cfg.bandwidth_hz = 1.0;
    cfg.rate_set = {1.0};
    GenDpSpec spec;
    spec.horizon = 2;
    spec.energy_grid = {0.0, 0.5, 1.0, 1.5, 2.0};
    spec.backlog_grid = {0.0, 1.0, 2.0, 3.0, 4.0};
    spec.gain_levels = {3.0};
    spec.gain_probs = {1.0};
    spec.harvest_values = {1.0};
    spec.harvest_probs = {1.0};
    spec.arrival_values = {2.0};
    spec.arrival_probs = {1.0};
    spec.power_set = {0.0, 0.5, 1.0, 1.5, 2.0};
    spec.infinite_terminal = false;
    spec.terminal_cost_per_bit = 10.0;
    const double cost = gen_dp_oracle(spec, cfg, 1.0, 2.0);
    all &= check(std::isfinite(cost) && cost >= 0.0,
                 "generalized dp oracle evaluates");
  }

  std::cout << (all ? "oracle-check: all suites passed"
                    : "oracle-check: FAILURES above")
            << "\n";
  return all ? 0 : kExitRuntimeFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon energy-efficient transmission scheduling "
               "simulator"};
  app.require_subcommand(1);

  CommonArgs lazy_args, general_args, sweep_args;
  bool emit_waterlevels = false;
  std::vector<int> horizons{25, 50, 75, 100, 150, 200};
  std::uint64_t oracle_seed = 1;

  CLI::App* lazy = app.add_subcommand("lazy", "basic-problem policy comparison");
  add_common_options(lazy, lazy_args);

  CLI::App* general =
      app.add_subcommand("general", "offline vs online water-filling");
  add_common_options(general, general_args);
  general->add_flag("--emit-waterlevels", emit_waterlevels,
                    "also write per-slot water-level traces");

  CLI::App* sweep = app.add_subcommand("sweep", "horizon sweep");
  add_common_options(sweep, sweep_args);
  sweep->add_option("--horizons", horizons, "horizon list (slots)");

  CLI::App* oracle =
      app.add_subcommand("oracle-check", "tiny-instance oracle suites");
  oracle->add_option("--seed", oracle_seed, "seed for random tiny instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lazy->parsed())
      return cmd_lazy(lazy_args, lazy->count("--seed") > 0,
                      lazy->count("--realizations") > 0);
    if (general->parsed())
      return cmd_general(general_args, general->count("--seed") > 0,
                         general->count("--realizations") > 0,
                         emit_waterlevels);
    if (sweep->parsed())
      return cmd_sweep(sweep_args, sweep->count("--seed") > 0,
                       sweep->count("--realizations") > 0, horizons);
    if (oracle->parsed()) return cmd_oracle_check(oracle_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeFailure;
  }
  return 0;
}
