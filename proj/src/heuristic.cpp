#include "lazysched/heuristic.hpp"

#include <algorithm>
#include <cmath>

#include "lazysched/waterfill.hpp"

namespace lazysched {

void observe(EstimatorState& est, double harvest, double arrival_bits,
             double gain) {
  est.slots_observed += 1;
  const double n = static_cast<double>(est.slots_observed);
  est.harvest_sum += harvest;
  est.arrival_sum += arrival_bits;
  est.mean_harvest = est.harvest_sum / n;
  est.mean_arrival = est.arrival_sum / n;
  est.gain_history.push_back(gain);
}

EstimatedBounds estimated_bounds(double w, int slot, double energy,
                                 double backlog, const EstimatorState& est,
                                 const SystemConfig& cfg) {
  w = std::max(w, 0.0);
  const int n_slots = cfg.horizon_slots;
  const double bits_per_level = cfg.bits_per_level();

  double capped_mean = 0.0;      // Mbar_e(w)
  double capped_log_mean = 0.0;  // Mbar_b(w)
  const double count = static_cast<double>(est.gain_history.size());
  for (double g : est.gain_history) {
    const double capped = std::min(1.0 / g, w);
    capped_mean += capped;
    capped_log_mean += std::log2(capped);
  }
  if (count > 0) {
    capped_mean /= count;
    capped_log_mean /= count;
  }

  const int remaining = n_slots - slot;
  double energy_bound;
  if (energy >= est.mean_harvest && remaining > 0) {
    energy_bound = (energy - est.mean_harvest) / remaining + est.mean_harvest +
                   capped_mean;
  } else {
    energy_bound = energy + capped_mean;
  }

  double bits_bound_log;
  if (backlog >= est.mean_arrival && remaining > 0) {
    bits_bound_log = (backlog - est.mean_arrival) /
                         (bits_per_level * remaining) +
                     est.mean_arrival / bits_per_level + capped_log_mean;
  } else {
    bits_bound_log = backlog / bits_per_level + capped_log_mean;
  }
  return {energy_bound, std::exp2(bits_bound_log)};
}

HeuristicDecision heuristic_power(int slot, double energy, double backlog,
                                  double gain, EstimatorState& est,
                                  const SystemConfig& cfg, int iterations) {
  double w = std::min(energy, backlog / cfg.bits_per_level());
  for (int k = 0; k < iterations; ++k) {
    const EstimatedBounds bounds =
        estimated_bounds(w, slot, energy, backlog, est, cfg);
    w = std::min(bounds.energy_bound, bounds.bits_bound);
  }

  double smoothed = w;
  if (est.has_smoothed)
    smoothed = cfg.beta * w + (1.0 - cfg.beta) * est.smoothed_level;
  est.smoothed_level = smoothed;
  est.has_smoothed = true;

  const double power = std::max(smoothed - 1.0 / gain, 0.0);
  const double rate = awgn_rate(power, gain, cfg);
  double fraction = 1.0;
  if (power > 0.0 && rate > 0.0)
    fraction = std::min({energy / power, backlog / rate, 1.0});

  HeuristicDecision decision;
  decision.water_level = smoothed;
  decision.raw_level = w;
  decision.power = power;
  decision.rate = rate;
  decision.slot_fraction = fraction;
  return decision;
}

}  // namespace lazysched
