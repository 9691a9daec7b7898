#pragma once

#include <cstdint>
#include <vector>

#include "lazysched/config.hpp"
#include "lazysched/lazy_policies.hpp"
#include "lazysched/metrics.hpp"
#include "lazysched/processes.hpp"
#include "lazysched/waterfill.hpp"

namespace lazysched {

struct ProcessSpecs {
  ArrivalChain arrivals;
  HarvestProcess harvest;
  FadingProcess fading;
};

// Samples one trace of all three processes.  The trace is a pure function
// of (master_seed, index): each process draws from its own stream, so
// traces are independent of generation order and, for a fixed
// (seed, index), a longer horizon extends the shorter trace without
// changing its prefix.
Realization generate_realization(const ProcessSpecs& specs,
                                 std::uint64_t master_seed,
                                 std::uint64_t index, int horizon);

// Closed-loop run of the basic problem: per slot the arrival lands, the
// policy picks a rate, min(b, r) bits leave the buffer, and the slot
// energy e(b, r) accrues.  The total cost adds the terminal penalty on
// the leftover backlog.  All bit quantities are integers, so bit
// conservation is exact.
RunMetrics simulate_lazy(const LazyPolicy& policy,
                         const Realization& realization,
                         const SystemConfig& cfg);

enum class GeneralPolicy { kOfflineWaterfill, kOnlineHeuristic };

struct GeneralRun {
  RunMetrics metrics;
  std::vector<ScheduleEntry> schedule;
};

// Closed-loop run of the generalized problem.  The offline policy sees
// the whole trace up front (water-filling); the online heuristic consumes
// it causally.  Consumption respects energy and data causality exactly
// (ledger quantization, see metrics.hpp).
GeneralRun simulate_general(GeneralPolicy policy,
                            const Realization& realization,
                            const SystemConfig& cfg, double initial_energy,
                            double initial_backlog,
                            int heuristic_iterations = 5);

// Exact conservation audit: delivered + final backlog must equal initial
// backlog + arrivals bit for bit, per-slot consumption must never exceed
// the ledger balance, and (for the generalized problem) cumulative
// consumed energy must stay within initial + harvested at every prefix.
// Returns true when every check passes.
bool verify_conservation(const RunMetrics& metrics,
                         const Realization& realization,
                         double initial_energy, double initial_backlog,
                         bool general_problem);

}  // namespace lazysched
