#pragma once

#include <functional>
#include <memory>

#include "lazysched/config.hpp"
#include "lazysched/lazy_dp.hpp"
#include "lazysched/processes.hpp"

namespace lazysched {

// A rate decision for the basic problem: (slot, backlog, arrival state)
// -> bits/slot.  Closures are reentrant and safe to share across workers.
using LazyPolicy = std::function<double(int slot, double backlog, int state)>;

// Expected-threshold rate before rounding to the rate set: the minimum
// over candidate drain windows a = 1..ceil(N + alpha - n) of
//   (b + E[arrivals over min(a, N-n) slots | state]) / a.
// With `one_step` set, only the a = 1 window is considered (the one-shot
// variant).  Returns 0 for an empty buffer.
double etls_required_rate(int slot, double backlog, int state,
                          const SystemConfig& cfg, const ArrivalChain& chain,
                          bool one_step = false);

// Required rate rounded up to the smallest rate in V that covers it
// (r_max if none does).
double etls_rate(int slot, double backlog, int state, const SystemConfig& cfg,
                 const ArrivalChain& chain, bool one_step = false);

// Greedy rate: the largest rate in V strictly below the backlog; min(V)
// as a partial-slot fallback when the backlog is positive but below every
// rate; 0 on an empty buffer.
double hasty_rate(double backlog, const SystemConfig& cfg);

// The smallest rate in V strictly above the stationary mean arrival rate.
// Throws NoStationaryDistribution for chains without one.
double constant_rate(const ArrivalChain& chain, const SystemConfig& cfg);

// Policy closures for the simulator.
LazyPolicy make_dp_policy(std::shared_ptr<const DpSolution> solution);
LazyPolicy make_etls_policy(const SystemConfig& cfg, const ArrivalChain& chain,
                            bool one_step = false);
LazyPolicy make_hasty_policy(const SystemConfig& cfg);
LazyPolicy make_constant_policy(const SystemConfig& cfg,
                                const ArrivalChain& chain);

}  // namespace lazysched
