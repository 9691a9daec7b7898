#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lazysched/sim.hpp"

namespace lazysched {

// One experiment: a config, process models, and a Monte-Carlo plan.
// Results are a pure function of (spec, seed) and do not depend on the
// worker count.
struct ExperimentSpec {
  SystemConfig config;
  ProcessSpecs processes;
  std::uint64_t seed = 1;
  int realizations = 10;
  double initial_energy = 0.0;   // generalized problem
  double initial_backlog = 0.0;  // generalized problem
  bool etls_one_step = false;
  int heuristic_iterations = 5;
};

struct ResultRow {
  std::uint64_t realization = 0;
  std::string policy;
  RunMetrics metrics;
  std::string error;  // empty on success; failed rows are kept and flagged
};

// Per-slot water-level trace row for the generalized problem.
struct TraceRow {
  std::uint64_t realization = 0;
  std::string policy;
  ScheduleEntry entry;
  double gain = 0.0;
  double arrival_bits = 0.0;
  double harvest = 0.0;
};

struct SweepRow {
  int horizon = 0;
  std::string policy;
  double mean_throughput_mbps = 0.0;
  double mean_energy_per_slot = 0.0;
  int realizations = 0;
};

// Worker count: LAZYSCHED_THREADS when set (>= 1), else the hardware
// concurrency.  Never affects results, only wall time.
int worker_count();

// Runs `fn` for indices 0..count-1 across workers; the output slot i is
// whatever fn(i) returned, so the result is independent of scheduling.
// Exceptions inside fn propagate from the caller.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn);

// The four basic-problem policies on common random realizations.
// Per-realization policy errors are flagged in-row; the run continues.
std::vector<ResultRow> run_lazy_experiment(const ExperimentSpec& spec);

// Offline water-filling and the online heuristic on common realizations.
// With `traces` non-null, emits one per-slot row per policy per slot.
std::vector<ResultRow> run_general_experiment(const ExperimentSpec& spec,
                                              std::vector<TraceRow>* traces);

// Mean throughput / energy per slot against the horizon, both policies,
// common random numbers across horizons (longer traces extend shorter
// ones).
std::vector<SweepRow> run_sweep_experiment(const ExperimentSpec& spec,
                                           const std::vector<int>& horizons);

}  // namespace lazysched
