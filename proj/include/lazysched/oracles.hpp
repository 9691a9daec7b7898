#pragma once

#include <vector>

#include "lazysched/config.hpp"
#include "lazysched/processes.hpp"
#include "lazysched/waterfill.hpp"

namespace lazysched {

// Brute-force validators for tiny instances.  They share no machinery
// with the production solvers: the lazy oracle enumerates decision trees
// directly, the schedule oracle enumerates water-level sequences on a
// grid, and the generalized-problem oracle runs backward induction on
// quantized grids.  All of them throw InstanceTooLarge above their caps.

// Minimum expected cost of the basic problem from (initial_backlog,
// initial_state) at slot 1, by exhaustive enumeration over all
// history-dependent decision trees and all arrival paths.
// Caps: N <= 3, |V| <= 2, <= 2 chain states, backlog lattice <= 20 points.
double lazy_brute_force_cost(const SystemConfig& cfg, const ArrivalChain& chain,
                             double initial_backlog, int initial_state);

struct GridSearchResult {
  double best_throughput = 0.0;       // bits
  double energy_of_best = 0.0;        // energy of the max-throughput schedule
  double min_energy_among_best = 0.0; // min energy within tp tolerance of best
  std::vector<double> best_levels;
};

// Exhaustive search over nondecreasing water-level sequences drawn from
// `levels`.  Among sequences whose throughput is within `tp_tolerance`
// of the maximum, also reports the minimum total energy.
// Caps: N <= 5, <= 30 levels.
GridSearchResult grid_search_oracle(const Realization& realization,
                                    const SystemConfig& cfg,
                                    const std::vector<double>& levels,
                                    double initial_energy,
                                    double initial_backlog,
                                    double tp_tolerance);

// Bound on the throughput gap between the continuous water-filling
// schedule and the best grid schedule, for a grid of spacing `step`:
// per slot the rate loss of snapping a level down by at most one step is
// at most sW * log2(1 + step * gamma_max).
double grid_throughput_bound(const SystemConfig& cfg, double step,
                             double max_gain, int horizon);

// Bound on the corresponding energy gap: direct level slack plus the
// energy value of the throughput tolerance at the steepest bits-per-
// energy exchange rate.
double grid_energy_bound(const SystemConfig& cfg, double step, double max_gain,
                         double min_gain, double max_level, int horizon);

// Generalized-problem dynamic program on quantized grids (tiny instances
// only).  Processes are i.i.d. per-slot categorical distributions; the
// decision set is a finite list of powers with rates tied through the
// AWGN formula.  Off-grid successor states snap to the nearest grid
// point.  With `infinite_terminal`, any positive terminal backlog costs
// infinity (undelivered data is forbidden); otherwise it costs
// `terminal_cost_per_bit` per bit.
struct GenDpSpec {
  int horizon = 2;                    // N <= 4
  std::vector<double> energy_grid;    // ascending, <= 20 points
  std::vector<double> backlog_grid;   // ascending, <= 20 points
  std::vector<double> gain_levels;
  std::vector<double> gain_probs;
  std::vector<double> harvest_values;
  std::vector<double> harvest_probs;
  std::vector<double> arrival_values;
  std::vector<double> arrival_probs;
  std::vector<double> power_set;      // M
  bool infinite_terminal = true;
  double terminal_cost_per_bit = 0.0;
};

// Expected optimal cost J_1 averaged over the slot-1 gain distribution,
// starting from (initial_energy, initial_backlog).
double gen_dp_oracle(const GenDpSpec& spec, const SystemConfig& cfg,
                     double initial_energy, double initial_backlog);

}  // namespace lazysched
