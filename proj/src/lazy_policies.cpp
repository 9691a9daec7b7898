#include "lazysched/lazy_policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lazysched {

namespace {

// Smallest rate in V that is >= required; r_max when even that falls
// short.
double round_up_to_rate(double required, const std::vector<double>& rates) {
  for (double r : rates)
    if (r >= required) return r;
  return rates.back();
}

// Cumulative expected arrivals per (state, slots-ahead), so the per-slot
// window scan is O(1) per window.
std::vector<std::vector<double>> expected_arrival_table(
    const ArrivalChain& chain, int max_ahead) {
  const int m = chain.num_states();
  std::vector<std::vector<double>> table(m);
  for (int i = 0; i < m; ++i) {
    table[i].resize(max_ahead + 1);
    table[i][0] = 0.0;
    std::vector<double> dist(m, 0.0);
    dist[i] = 1.0;
    std::vector<double> next(m);
    for (int a = 1; a <= max_ahead; ++a) {
      for (int j = 0; j < m; ++j) {
        double p = 0.0;
        for (int k = 0; k < m; ++k) p += dist[k] * chain.transition[k][j];
        next[j] = p;
      }
      dist.swap(next);
      double step = 0.0;
      for (int j = 0; j < m; ++j) step += dist[j] * chain.lengths[j];
      table[i][a] = table[i][a - 1] + step;
    }
  }
  return table;
}

double required_rate_from_table(int slot, double backlog, int state,
                                const SystemConfig& cfg,
                                const std::vector<std::vector<double>>& table,
                                bool one_step) {
  if (backlog <= 0) return 0.0;
  const int n_slots = cfg.horizon_slots;
  const int max_window = std::max(
      1, static_cast<int>(std::ceil(n_slots + cfg.alpha - slot - 1e-12)));
  const int last_window = one_step ? 1 : max_window;
  double best = std::numeric_limits<double>::infinity();
  for (int a = 1; a <= last_window; ++a) {
    const int within_horizon = std::min(a, n_slots - slot);
    const double expected =
        within_horizon > 0 ? table[state][within_horizon] : 0.0;
    best = std::min(best, (backlog + expected) / a);
  }
  return best;
}

}  // namespace

double etls_required_rate(int slot, double backlog, int state,
                          const SystemConfig& cfg, const ArrivalChain& chain,
                          bool one_step) {
  const auto table = expected_arrival_table(chain, cfg.horizon_slots);
  return required_rate_from_table(slot, backlog, state, cfg, table, one_step);
}

double etls_rate(int slot, double backlog, int state, const SystemConfig& cfg,
                 const ArrivalChain& chain, bool one_step) {
  if (backlog <= 0) return 0.0;
  return round_up_to_rate(
      etls_required_rate(slot, backlog, state, cfg, chain, one_step),
      cfg.rate_set);
}

double hasty_rate(double backlog, const SystemConfig& cfg) {
  if (backlog <= 0) return 0.0;
  double chosen = 0.0;
  for (double r : cfg.rate_set) {
    if (r < backlog)
      chosen = r;
    else
      break;
  }
  if (chosen == 0.0) return cfg.rate_set.front();  // partial-slot fallback
  return chosen;
}

double constant_rate(const ArrivalChain& chain, const SystemConfig& cfg) {
  const double mean = mean_arrival_bits(chain);
  for (double r : cfg.rate_set)
    if (r > mean) return r;
  return cfg.rate_set.back();
}

LazyPolicy make_dp_policy(std::shared_ptr<const DpSolution> solution) {
  return [solution](int slot, double backlog, int state) {
    return solution->rate_at(slot, backlog, state);
  };
}

LazyPolicy make_etls_policy(const SystemConfig& cfg, const ArrivalChain& chain,
                            bool one_step) {
  auto table = std::make_shared<const std::vector<std::vector<double>>>(
      expected_arrival_table(chain, cfg.horizon_slots));
  SystemConfig config = cfg;
  return [config, table, one_step](int slot, double backlog, int state) {
    if (backlog <= 0) return 0.0;
    const double required = required_rate_from_table(slot, backlog, state,
                                                     config, *table, one_step);
    return round_up_to_rate(required, config.rate_set);
  };
}

LazyPolicy make_hasty_policy(const SystemConfig& cfg) {
  SystemConfig config = cfg;
  return [config](int, double backlog, int) {
    return hasty_rate(backlog, config);
  };
}

LazyPolicy make_constant_policy(const SystemConfig& cfg,
                                const ArrivalChain& chain) {
  const double rate = constant_rate(chain, cfg);
  return [rate](int, double backlog, int) {
    return backlog > 0 ? rate : 0.0;
  };
}

}  // namespace lazysched
