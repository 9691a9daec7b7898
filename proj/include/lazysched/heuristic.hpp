#pragma once

#include <vector>

#include "lazysched/config.hpp"

namespace lazysched {

// Running statistics for the statistics-free online policy.  Updated once
// per slot with that slot's observations only; never looks ahead.
struct EstimatorState {
  int slots_observed = 0;       // n
  double harvest_sum = 0.0;
  double arrival_sum = 0.0;
  double mean_harvest = 0.0;    // harvest_sum / n, the exact average
  double mean_arrival = 0.0;    // arrival_sum / n
  std::vector<double> gain_history;  // gamma_1..gamma_n
  double smoothed_level = 0.0;  // v_{n-1}
  bool has_smoothed = false;
};

// Folds in the current slot's observations.
void observe(EstimatorState& est, double harvest, double arrival_bits,
             double gain);

struct EstimatedBounds {
  double energy_bound;  // estimated w_e
  double bits_bound;    // estimated w_b
};

// Estimated water-level bounds built from running means instead of the
// true future:
//   w_e = (e - Hbar)/(N-n) + Hbar + Mbar_e(w)     if e >= Hbar and n < N
//         e + Mbar_e(w)                           otherwise
// and the log2-domain analogue for the bits bound with b/sW terms.  The
// n = N edge (division by N-n) falls back to the spend-down branch.
EstimatedBounds estimated_bounds(double w, int slot, double energy,
                                 double backlog, const EstimatorState& est,
                                 const SystemConfig& cfg);

struct HeuristicDecision {
  double water_level = 0.0;   // smoothed level used for the decision
  double raw_level = 0.0;     // k-th iterate before smoothing
  double power = 0.0;         // power units
  double rate = 0.0;          // bits/slot
  double slot_fraction = 1.0;
};

// Power decision for the current slot: runs `iterations` fixed-point
// steps of min(estimated bounds) from the seed min(e, b/sW), applies
// exponential smoothing v_n = beta*w + (1-beta)*v_{n-1} (the first slot
// starts the smoother at its own estimate), and converts the smoothed
// level to power through the water-filling form.  The slot fraction caps
// consumption at the available energy and data.  Updates the smoother
// state.
HeuristicDecision heuristic_power(int slot, double energy, double backlog,
                                  double gain, EstimatorState& est,
                                  const SystemConfig& cfg, int iterations);

}  // namespace lazysched
