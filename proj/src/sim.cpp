#include "lazysched/sim.hpp"

#include <algorithm>
#include <cmath>

#include "lazysched/heuristic.hpp"
#include "lazysched/power.hpp"
#include "lazysched/rng.hpp"

namespace lazysched {

namespace {

std::vector<int> sample_arrival_states(const ArrivalChain& chain,
                                       RngStream& stream, int horizon) {
  std::vector<double> initial = chain.initial_distribution;
  if (initial.empty()) initial = stationary_distribution(chain);
  std::vector<int> states(horizon);
  int state = stream.categorical(initial);
  for (int n = 0; n < horizon; ++n) {
    if (n > 0) state = stream.categorical(chain.transition[state]);
    states[n] = state;
  }
  return states;
}

std::vector<double> sample_harvests(const HarvestProcess& harvest,
                                    RngStream& stream, int horizon) {
  std::vector<double> out(horizon, 0.0);
  const double amount = quantize_energy(harvest.amount);
  if (harvest.kind == HarvestProcess::Kind::kBernoulli) {
    for (int n = 0; n < horizon; ++n)
      if (stream.bernoulli(harvest.p_event)) out[n] = amount;
  } else {
    // Symmetric two-state on/off chain; stationary start (half/half).
    bool active = stream.bernoulli(0.5);
    for (int n = 0; n < horizon; ++n) {
      if (n > 0 && !stream.bernoulli(harvest.p_stay)) active = !active;
      if (active) out[n] = amount;
    }
  }
  return out;
}

std::vector<double> sample_gains(const FadingProcess& fading,
                                 RngStream& stream, int horizon) {
  std::vector<double> out(horizon);
  for (int n = 0; n < horizon; ++n)
    out[n] = fading.gains[stream.categorical(fading.probabilities)];
  return out;
}

void finalize_metrics(RunMetrics& metrics, const SystemConfig& cfg) {
  metrics.total_cost = metrics.total_energy + metrics.terminal_penalty;
  metrics.backlog_percentage =
      metrics.total_arrived_bits > 0
          ? 100.0 * metrics.backlog_end_bits / metrics.total_arrived_bits
          : 0.0;
  metrics.avg_throughput_bits_per_slot =
      metrics.delivered_bits / metrics.horizon;
  metrics.avg_throughput_mbps =
      metrics.avg_throughput_bits_per_slot / cfg.slot_seconds / 1e6;
  metrics.energy_per_slot = metrics.total_energy / metrics.horizon;
}

}  // namespace

Realization generate_realization(const ProcessSpecs& specs,
                                 std::uint64_t master_seed,
                                 std::uint64_t index, int horizon) {
  specs.arrivals.validate();
  specs.harvest.validate();
  specs.fading.validate();

  Realization r;
  r.master_seed = master_seed;
  r.index = index;

  RngStream arrival_stream(master_seed, index,
                           static_cast<std::uint64_t>(StreamPurpose::kArrivals));
  r.arrival_states = sample_arrival_states(specs.arrivals, arrival_stream,
                                           horizon);
  r.arrivals.resize(horizon);
  for (int n = 0; n < horizon; ++n)
    r.arrivals[n] = specs.arrivals.lengths[r.arrival_states[n]];

  RngStream harvest_stream(master_seed, index,
                           static_cast<std::uint64_t>(StreamPurpose::kHarvests));
  r.harvests = sample_harvests(specs.harvest, harvest_stream, horizon);

  RngStream gain_stream(master_seed, index,
                        static_cast<std::uint64_t>(StreamPurpose::kGains));
  r.gains = sample_gains(specs.fading, gain_stream, horizon);
  return r;
}

RunMetrics simulate_lazy(const LazyPolicy& policy,
                         const Realization& realization,
                         const SystemConfig& cfg) {
  const int n_slots = realization.horizon();
  RunMetrics metrics;
  metrics.horizon = n_slots;
  metrics.per_slot_energy.resize(n_slots, 0.0);
  metrics.per_slot_delivered.resize(n_slots, 0.0);

  double backlog = 0.0;
  for (int n = 1; n <= n_slots; ++n) {
    backlog += realization.arrivals[n - 1];
    metrics.total_arrived_bits += realization.arrivals[n - 1];
    const int state = realization.arrival_states[n - 1];
    const double rate = policy(n, backlog, state);
    const double delivered = std::min(backlog, rate);
    const double spent = energy_per_slot(backlog, rate, cfg);
    backlog -= delivered;
    metrics.per_slot_energy[n - 1] = spent;
    metrics.per_slot_delivered[n - 1] = delivered;
    metrics.total_energy += spent;
    metrics.delivered_bits += delivered;
  }
  metrics.backlog_end_bits = backlog;
  metrics.terminal_penalty = terminal_cost(backlog, cfg);
  finalize_metrics(metrics, cfg);
  return metrics;
}

GeneralRun simulate_general(GeneralPolicy policy,
                            const Realization& realization,
                            const SystemConfig& cfg, double initial_energy,
                            double initial_backlog,
                            int heuristic_iterations) {
  if (policy == GeneralPolicy::kOfflineWaterfill) {
    OfflineResult offline =
        offline_schedule(realization, cfg, initial_energy, initial_backlog);
    return {std::move(offline.metrics), std::move(offline.schedule)};
  }

  const int n_slots = realization.horizon();
  GeneralRun run;
  RunMetrics& metrics = run.metrics;
  metrics.horizon = n_slots;
  metrics.per_slot_energy.resize(n_slots, 0.0);
  metrics.per_slot_delivered.resize(n_slots, 0.0);
  run.schedule.reserve(n_slots);

  double energy = quantize_energy(initial_energy);
  double backlog = quantize_bits(initial_backlog);
  metrics.total_arrived_bits = backlog;

  EstimatorState est;
  for (int n = 1; n <= n_slots; ++n) {
    const double harvest = quantize_energy(realization.harvests[n - 1]);
    const double arrival = quantize_bits(realization.arrivals[n - 1]);
    const double gain = realization.gains[n - 1];
    energy += harvest;
    backlog += arrival;
    metrics.total_arrived_bits += arrival;

    observe(est, harvest, arrival, gain);
    const HeuristicDecision decision =
        heuristic_power(n, energy, backlog, gain, est, cfg,
                        heuristic_iterations);

    double consumed = 0.0;
    double delivered = 0.0;
    if (decision.power > 0.0 && decision.rate > 0.0) {
      consumed = std::min(
          quantize_energy(decision.slot_fraction * decision.power), energy);
      delivered = std::min(
          quantize_bits(decision.slot_fraction * decision.rate), backlog);
    }
    run.schedule.push_back({n, decision.water_level, decision.power,
                            decision.rate, decision.slot_fraction});
    energy -= consumed;
    backlog -= delivered;
    metrics.per_slot_energy[n - 1] = consumed;
    metrics.per_slot_delivered[n - 1] = delivered;
    metrics.total_energy += consumed;
    metrics.delivered_bits += delivered;
  }
  metrics.backlog_end_bits = backlog;
  finalize_metrics(metrics, cfg);
  return run;
}

bool verify_conservation(const RunMetrics& metrics,
                         const Realization& realization,
                         double initial_energy, double initial_backlog,
                         bool general_problem) {
  const int n_slots = realization.horizon();
  if (metrics.horizon != n_slots) return false;
  if (static_cast<int>(metrics.per_slot_energy.size()) != n_slots) return false;
  if (static_cast<int>(metrics.per_slot_delivered.size()) != n_slots)
    return false;

  // Bits: replay the ledger and require bitwise agreement.
  double backlog = general_problem ? quantize_bits(initial_backlog)
                                   : initial_backlog;
  double arrived = backlog;
  double delivered_total = 0.0;
  for (int n = 0; n < n_slots; ++n) {
    const double arrival = general_problem
                               ? quantize_bits(realization.arrivals[n])
                               : realization.arrivals[n];
    backlog += arrival;
    arrived += arrival;
    const double delivered = metrics.per_slot_delivered[n];
    if (delivered < 0 || delivered > backlog) return false;
    backlog -= delivered;
    delivered_total += delivered;
  }
  if (backlog != metrics.backlog_end_bits) return false;
  if (arrived != metrics.total_arrived_bits) return false;
  if (delivered_total != metrics.delivered_bits) return false;
  if (delivered_total + backlog != arrived) return false;

  // Energy causality (generalized problem): cumulative consumption can
  // never outrun initial plus harvested energy, and the running battery
  // replay must stay nonnegative.
  if (general_problem) {
    double battery = quantize_energy(initial_energy);
    double budget = battery;
    double consumed_total = 0.0;
    for (int n = 0; n < n_slots; ++n) {
      const double harvest = quantize_energy(realization.harvests[n]);
      battery += harvest;
      budget += harvest;
      const double consumed = metrics.per_slot_energy[n];
      if (consumed < 0 || consumed > battery) return false;
      battery -= consumed;
      consumed_total += consumed;
      if (consumed_total > budget) return false;
    }
    if (consumed_total != metrics.total_energy) return false;
  }
  return true;
}

}  // namespace lazysched
