#include "lazysched/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lazysched/errors.hpp"

namespace lazysched {

double awgn_rate(double power, double gain, const SystemConfig& cfg) {
  if (power <= 0) return 0.0;
  return cfg.bits_per_level() * std::log2(1.0 + power * gain);
}

namespace {

// One evaluation of both bound families at a trial level `w`, together
// with the local affine description of each binding window.  Within a
// region where no 1/gamma_l crosses w, the binding window's bound is
// affine in w (energy side) or in log2 w (bits side):
//   bound = (K + n_w * w) / (u+1),   n_w = #slots capped at w,
// so its own fixed point K / (u+1 - n_w) can be solved directly.
struct BoundsDetail {
  double energy_bound;
  double bits_bound;
  double energy_solve;  // fixed point of the binding energy window
  double bits_solve;    // fixed point of the binding bits window
};

BoundsDetail water_bounds_detail(double w, const GenState& state,
                                 std::span<const double> future_harvests,
                                 std::span<const double> future_arrivals,
                                 std::span<const double> gains_from_slot,
                                 const SystemConfig& cfg) {
  w = std::max(w, 0.0);
  const std::size_t windows = gains_from_slot.size();
  const double bits_per_level = cfg.bits_per_level();
  const double inf = std::numeric_limits<double>::infinity();

  double best_e = inf;
  double best_b_log = inf;
  double e_const_best = 0.0, b_const_best = 0.0;
  std::size_t e_capped_best = 0, b_capped_best = 0, e_window = 0, b_window = 0;

  double harvest_sum = 0.0;
  double arrival_sum = 0.0;
  double const_sum = 0.0;      // sum of 1/gamma_l over slots with 1/g <= w
  double const_log_sum = 0.0;  // same in log2
  std::size_t capped = 0;      // slots with 1/gamma_l > w (cap at w)
  const double log2w = std::log2(w);  // -inf at w == 0 is intended

  for (std::size_t u = 0; u < windows; ++u) {
    if (u > 0) {
      harvest_sum += future_harvests[u - 1];
      arrival_sum += future_arrivals[u - 1];
    }
    const double inverse_gain = 1.0 / gains_from_slot[u];
    if (inverse_gain <= w) {
      const_sum += inverse_gain;
      const_log_sum += std::log2(inverse_gain);
    } else {
      ++capped;
    }
    const double denom = static_cast<double>(u + 1);
    // capped == 0 avoids 0 * inf when the seed is evaluated at w = inf.
    const double e_const = state.energy + harvest_sum + const_sum;
    const double e_term =
        (e_const + (capped == 0 ? 0.0 : capped * w)) / denom;
    if (e_term < best_e) {
      best_e = e_term;
      e_const_best = e_const;
      e_capped_best = capped;
      e_window = u + 1;
    }
    const double b_const =
        (state.backlog + arrival_sum) / bits_per_level + const_log_sum;
    const double b_term =
        (b_const + (capped == 0 ? 0.0 : capped * log2w)) / denom;
    if (b_term < best_b_log) {
      best_b_log = b_term;
      b_const_best = b_const;
      b_capped_best = capped;
      b_window = u + 1;
    }
  }

  BoundsDetail detail;
  detail.energy_bound = best_e;
  detail.bits_bound = std::exp2(best_b_log);
  detail.energy_solve =
      e_capped_best < e_window
          ? e_const_best / static_cast<double>(e_window - e_capped_best)
          : inf;
  detail.bits_solve =
      b_capped_best < b_window
          ? std::exp2(b_const_best /
                      static_cast<double>(b_window - b_capped_best))
          : inf;
  return detail;
}

}  // namespace

WaterBounds water_bounds(double w, const GenState& state,
                         std::span<const double> future_harvests,
                         std::span<const double> future_arrivals,
                         std::span<const double> gains_from_slot,
                         const SystemConfig& cfg) {
  const BoundsDetail detail = water_bounds_detail(
      w, state, future_harvests, future_arrivals, gains_from_slot, cfg);
  return {detail.energy_bound, detail.bits_bound};
}

double water_level_seed(const GenState& state,
                        std::span<const double> future_harvests,
                        std::span<const double> future_arrivals,
                        std::span<const double> gains_from_slot,
                        const SystemConfig& cfg) {
  // The bound map saturates once w exceeds every 1/gamma, so its value
  // at infinity is the largest value it can ever produce; every fixed
  // point lies at or below it.
  const WaterBounds at_infinity =
      water_bounds(std::numeric_limits<double>::infinity(), state,
                   future_harvests, future_arrivals, gains_from_slot, cfg);
  return std::min(at_infinity.energy_bound, at_infinity.bits_bound);
}

namespace {

// One iteration step: evaluate the bounds at w, then jump to the binding
// window's own fixed point, clamped at the nearest cap boundary 1/gamma
// below the current level and never below the plain map's target.  Both
// candidates sit at or above the greatest fixed point (the binding bound
// dominates the map inside the region, and below the boundary the affine
// description no longer applies), so the iteration stays monotone while
// skipping the slow creep the plain map exhibits when a window is mostly
// capped at w.
double iterate_step(double w, const GenState& state,
                    std::span<const double> future_harvests,
                    std::span<const double> future_arrivals,
                    std::span<const double> gains_from_slot,
                    const SystemConfig& cfg) {
  const BoundsDetail detail = water_bounds_detail(
      w, state, future_harvests, future_arrivals, gains_from_slot, cfg);
  const double plain = std::min(detail.energy_bound, detail.bits_bound);
  const double solve = detail.energy_bound <= detail.bits_bound
                           ? detail.energy_solve
                           : detail.bits_solve;
  double boundary = 0.0;
  for (double g : gains_from_slot) {
    const double inverse_gain = 1.0 / g;
    if (inverse_gain < w) boundary = std::max(boundary, inverse_gain);
  }
  return std::min(plain, std::max(solve, boundary));
}

}  // namespace

FixedPointResult fixed_point_water_level(
    const GenState& state, std::span<const double> future_harvests,
    std::span<const double> future_arrivals,
    std::span<const double> gains_from_slot, const SystemConfig& cfg) {
  double w = water_level_seed(state, future_harvests, future_arrivals,
                              gains_from_slot, cfg);
  for (int k = 1; k < kFixedPointMaxIterations; ++k) {
    const double next = iterate_step(w, state, future_harvests,
                                     future_arrivals, gains_from_slot, cfg);
    const double step = std::abs(next - w);
    w = next;
    if (step < kFixedPointTolerance * std::max(1.0, w))
      return {w, k + 1};
  }
  throw NoConvergence("water-level fixed point did not converge at slot " +
                      std::to_string(state.slot));
}

std::vector<double> water_level_iterates(
    const GenState& state, std::span<const double> future_harvests,
    std::span<const double> future_arrivals,
    std::span<const double> gains_from_slot, const SystemConfig& cfg,
    int count) {
  std::vector<double> iterates;
  iterates.reserve(count);
  double w = water_level_seed(state, future_harvests, future_arrivals,
                              gains_from_slot, cfg);
  iterates.push_back(w);
  for (int k = 1; k < count; ++k) {
    w = iterate_step(w, state, future_harvests, future_arrivals,
                     gains_from_slot, cfg);
    iterates.push_back(w);
  }
  return iterates;
}

OfflineResult offline_schedule(const Realization& realization,
                               const SystemConfig& cfg, double initial_energy,
                               double initial_backlog) {
  const int n_slots = realization.horizon();
  OfflineResult result;
  result.schedule.reserve(n_slots);
  RunMetrics& metrics = result.metrics;
  metrics.horizon = n_slots;
  metrics.per_slot_energy.resize(n_slots, 0.0);
  metrics.per_slot_delivered.resize(n_slots, 0.0);

  double energy = quantize_energy(initial_energy);
  double backlog = quantize_bits(initial_backlog);
  metrics.total_arrived_bits = backlog;

  for (int n = 1; n <= n_slots; ++n) {
    const double harvest = quantize_energy(realization.harvests[n - 1]);
    const double arrival = quantize_bits(realization.arrivals[n - 1]);
    energy += harvest;
    backlog += arrival;
    metrics.total_arrived_bits += arrival;

    const GenState state{n, energy, backlog, realization.gains[n - 1]};
    const std::span<const double> gains(realization.gains.data() + (n - 1),
                                        static_cast<std::size_t>(n_slots - n + 1));
    const std::span<const double> harvests(realization.harvests.data() + n,
                                           static_cast<std::size_t>(n_slots - n));
    const std::span<const double> arrivals(realization.arrivals.data() + n,
                                           static_cast<std::size_t>(n_slots - n));
    const FixedPointResult fp =
        fixed_point_water_level(state, harvests, arrivals, gains, cfg);

    const double inverse_gain = 1.0 / state.gain;
    const double power = std::max(fp.water_level - inverse_gain, 0.0);
    const double rate = awgn_rate(power, state.gain, cfg);

    double fraction = 1.0;
    double consumed = 0.0;
    double delivered = 0.0;
    if (power > 0.0 && rate > 0.0) {
      fraction = std::min({energy / power, backlog / rate, 1.0});
      consumed = std::min(quantize_energy(fraction * power), energy);
      delivered = std::min(quantize_bits(fraction * rate), backlog);
    }
    result.schedule.push_back({n, fp.water_level, power, rate, fraction});

    energy -= consumed;
    backlog -= delivered;
    metrics.per_slot_energy[n - 1] = consumed;
    metrics.per_slot_delivered[n - 1] = delivered;
    metrics.total_energy += consumed;
    metrics.delivered_bits += delivered;
  }

  metrics.backlog_end_bits = backlog;
  metrics.total_cost = metrics.total_energy;
  metrics.backlog_percentage =
      metrics.total_arrived_bits > 0
          ? 100.0 * metrics.backlog_end_bits / metrics.total_arrived_bits
          : 0.0;
  metrics.avg_throughput_bits_per_slot = metrics.delivered_bits / n_slots;
  metrics.avg_throughput_mbps =
      metrics.avg_throughput_bits_per_slot / cfg.slot_seconds / 1e6;
  metrics.energy_per_slot = metrics.total_energy / n_slots;
  return result;
}

}  // namespace lazysched
