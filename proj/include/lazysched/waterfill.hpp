#pragma once

#include <span>
#include <vector>

#include "lazysched/config.hpp"
#include "lazysched/metrics.hpp"
#include "lazysched/processes.hpp"

namespace lazysched {

// State of the generalized problem at the decision point of a slot:
// battery and backlog include the arrivals of that slot.
struct GenState {
  int slot = 1;          // n, 1-based
  double energy = 0.0;   // e_n, power-unit-slots
  double backlog = 0.0;  // b_n, bits
  double gain = 1.0;     // gamma_n, SNR per power unit
};

// One slot of a water-filling schedule.
struct ScheduleEntry {
  int slot = 0;
  double water_level = 0.0;   // power units
  double power = 0.0;         // (w - 1/gamma)_+, power units
  double rate = 0.0;          // bits/slot
  double slot_fraction = 1.0; // portion of the slot actually used
};

struct WaterBounds {
  double energy_bound;  // w_e
  double bits_bound;    // w_b
};

// Rate induced by a transmit power on the AWGN channel, bits/slot.
double awgn_rate(double power, double gain, const SystemConfig& cfg);

// Upper bounds on the slot-n water level implied by energy and data
// causality over every window reaching into the future, evaluated at a
// trial level `w`:
//
//   w_e   = min_u [ e_n + sum H_{n+1..n+u} + sum_{l=n..n+u} min(1/g_l, w) ]
//           / (u+1)
//   log2(w_b) = min_v [ (b_n + sum B_{n+1..n+v}) / sW
//                       + sum_{l=n..n+v} log2(min(1/g_l, w)) ] / (v+1)
//
// Slot-normalized units: energies in power-unit-slots, sW bits/slot.
// `gains_from_slot` covers slots n..N (size N-n+1); the future lists
// cover n+1..N (one element shorter).  The map w -> min(w_e, w_b) is
// nondecreasing in w.
WaterBounds water_bounds(double w, const GenState& state,
                         std::span<const double> future_harvests,
                         std::span<const double> future_arrivals,
                         std::span<const double> gains_from_slot,
                         const SystemConfig& cfg);

// Seed of the fixed-point iteration: the bound map's value at infinite
// water level (all caps saturated at 1/gamma), which dominates every
// fixed point.
double water_level_seed(const GenState& state,
                        std::span<const double> future_harvests,
                        std::span<const double> future_arrivals,
                        std::span<const double> gains_from_slot,
                        const SystemConfig& cfg);

struct FixedPointResult {
  double water_level = 0.0;
  int iterations = 0;
};

inline constexpr double kFixedPointTolerance = 1e-9;
inline constexpr int kFixedPointMaxIterations = 50;

// Greatest fixed point of w -> min(w_e, w_b), reached by iterating down
// from the seed.  Iterates are nonincreasing.  Converges when the step
// falls below 1e-9 relative; throws NoConvergence past 50 iterations.
FixedPointResult fixed_point_water_level(
    const GenState& state, std::span<const double> future_harvests,
    std::span<const double> future_arrivals,
    std::span<const double> gains_from_slot, const SystemConfig& cfg);

// First `count` iterates of the same iteration, starting with the seed
// w^(1); useful for inspecting convergence behavior.
std::vector<double> water_level_iterates(
    const GenState& state, std::span<const double> future_harvests,
    std::span<const double> future_arrivals,
    std::span<const double> gains_from_slot, const SystemConfig& cfg,
    int count);

struct OfflineResult {
  std::vector<ScheduleEntry> schedule;
  RunMetrics metrics;
};

// Throughput-maximizing offline schedule for a fully known realization:
// per slot, the water level is the greatest fixed point given the current
// (battery, backlog) and the remaining trace; power (w - 1/gamma)_+, rate
// from the AWGN formula, and the slot fraction min(e/rho, b/r, 1) cap
// consumption at what is available (an idle slot counts as a full slot at
// zero power).  Delivered bits and consumed energy go through the exact
// ledger lattice (see metrics.hpp), so the battery and backlog never go
// negative.
OfflineResult offline_schedule(const Realization& realization,
                               const SystemConfig& cfg, double initial_energy,
                               double initial_backlog);

}  // namespace lazysched
