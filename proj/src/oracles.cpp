#include "lazysched/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "lazysched/errors.hpp"
#include "lazysched/power.hpp"

namespace lazysched {

namespace {

// ---------------------------------------------------------------------
// Lazy-problem decision-tree enumeration.
//
// A history-dependent policy assigns one candidate rate to every
// reachable history (i_1, ..., i_n); histories are indexed level by
// level.  For tiny instances the full policy space is walked with an
// odometer and each policy is evaluated exactly over all arrival paths.
// The minimum over history-dependent policies equals the minimum over
// Markov policies for this additive-cost chain problem.
// ---------------------------------------------------------------------

struct TreeLayout {
  int horizon;
  int states;
  std::vector<int> level_offset;  // node index of the first history at slot n
  int total_nodes;
};

TreeLayout tree_layout(int horizon, int states) {
  TreeLayout layout;
  layout.horizon = horizon;
  layout.states = states;
  layout.level_offset.resize(horizon + 1, 0);
  int nodes = 0;
  int level = 1;
  for (int n = 1; n <= horizon; ++n) {
    layout.level_offset[n] = nodes;
    nodes += level;
    level *= states;
  }
  layout.total_nodes = nodes;
  return layout;
}

// History (i_2..i_n) encoded little-endian in base `states`.
int node_index(const TreeLayout& layout, int slot, int history_code) {
  return layout.level_offset[slot] + history_code;
}

double policy_expected_cost(const SystemConfig& cfg, const ArrivalChain& chain,
                            double initial_backlog, int initial_state,
                            const TreeLayout& layout,
                            const std::vector<int>& assignment,
                            const std::vector<double>& rates) {
  const int n_slots = layout.horizon;
  const int m = layout.states;
  const int n_paths = static_cast<int>(std::pow(m, n_slots - 1) + 0.5);
  double expected = 0.0;
  std::vector<int> path(n_slots);
  for (int code = 0; code < n_paths; ++code) {
    path[0] = initial_state;
    int rest = code;
    double prob = 1.0;
    for (int n = 1; n < n_slots; ++n) {
      path[n] = rest % m;
      rest /= m;
      prob *= chain.transition[path[n - 1]][path[n]];
    }
    if (prob == 0.0) continue;
    double backlog = initial_backlog;
    double cost = 0.0;
    int history_code = 0;
    for (int n = 1; n <= n_slots; ++n) {
      if (n > 1) {
        backlog += chain.lengths[path[n - 1]];
        history_code = history_code * m + path[n - 1];
      }
      const double rate = rates[assignment[node_index(layout, n, history_code)]];
      cost += energy_per_slot(backlog, rate, cfg);
      backlog = std::max(backlog - rate, 0.0);
    }
    cost += terminal_cost(backlog, cfg);
    expected += prob * cost;
  }
  return expected;
}

// ---------------------------------------------------------------------
// Generalized-problem schedule evaluation shared by the grid oracle.
// ---------------------------------------------------------------------

struct ScheduleOutcome {
  double throughput = 0.0;
  double energy = 0.0;
};

ScheduleOutcome evaluate_levels(const Realization& realization,
                                const SystemConfig& cfg,
                                const std::vector<double>& levels,
                                double initial_energy,
                                double initial_backlog) {
  double energy = initial_energy;
  double backlog = initial_backlog;
  ScheduleOutcome outcome;
  for (int n = 1; n <= realization.horizon(); ++n) {
    energy += realization.harvests[n - 1];
    backlog += realization.arrivals[n - 1];
    const double gain = realization.gains[n - 1];
    const double power = std::max(levels[n - 1] - 1.0 / gain, 0.0);
    const double rate = awgn_rate(power, gain, cfg);
    if (power > 0.0 && rate > 0.0) {
      const double fraction = std::min({energy / power, backlog / rate, 1.0});
      const double consumed = std::min(fraction * power, energy);
      const double delivered = std::min(fraction * rate, backlog);
      energy -= consumed;
      backlog -= delivered;
      outcome.energy += consumed;
      outcome.throughput += delivered;
    }
  }
  return outcome;
}

void enumerate_sequences(const Realization& realization,
                         const SystemConfig& cfg,
                         const std::vector<double>& levels,
                         double initial_energy, double initial_backlog,
                         int slot, int min_level,
                         std::vector<double>& current,
                         const std::function<void(const std::vector<double>&,
                                                  const ScheduleOutcome&)>& visit) {
  if (slot > realization.horizon()) {
    visit(current, evaluate_levels(realization, cfg, current, initial_energy,
                                   initial_backlog));
    return;
  }
  for (std::size_t k = min_level; k < levels.size(); ++k) {
    current.push_back(levels[k]);
    enumerate_sequences(realization, cfg, levels, initial_energy,
                        initial_backlog, slot + 1, static_cast<int>(k),
                        current, visit);
    current.pop_back();
  }
}

}  // namespace

double lazy_brute_force_cost(const SystemConfig& cfg, const ArrivalChain& chain,
                             double initial_backlog, int initial_state) {
  cfg.validate();
  chain.validate();
  const int n_slots = cfg.horizon_slots;
  const int m = chain.num_states();
  if (n_slots > 3 || cfg.rate_set.size() > 2 || m > 2)
    throw InstanceTooLarge("lazy brute force caps: N <= 3, |V| <= 2, <= 2 states");

  std::vector<double> rates{0.0};
  for (double r : cfg.rate_set) rates.push_back(r);
  const int n_choices = static_cast<int>(rates.size());

  const TreeLayout layout = tree_layout(n_slots, m);
  std::vector<int> assignment(layout.total_nodes, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best,
                    policy_expected_cost(cfg, chain, initial_backlog,
                                         initial_state, layout, assignment,
                                         rates));
    int digit = 0;
    while (digit < layout.total_nodes) {
      if (++assignment[digit] < n_choices) break;
      assignment[digit] = 0;
      ++digit;
    }
    if (digit == layout.total_nodes) break;
  }
  return best;
}

GridSearchResult grid_search_oracle(const Realization& realization,
                                    const SystemConfig& cfg,
                                    const std::vector<double>& levels,
                                    double initial_energy,
                                    double initial_backlog,
                                    double tp_tolerance) {
  if (realization.horizon() > 5 || levels.size() > 30)
    throw InstanceTooLarge("grid oracle caps: N <= 5, <= 30 levels");

  GridSearchResult result;
  result.min_energy_among_best = std::numeric_limits<double>::infinity();
  std::vector<double> current;

  // First pass: maximum throughput.
  enumerate_sequences(realization, cfg, levels, initial_energy,
                      initial_backlog, 1, 0, current,
                      [&](const std::vector<double>& seq,
                          const ScheduleOutcome& outcome) {
                        if (outcome.throughput > result.best_throughput ||
                            result.best_levels.empty()) {
                          result.best_throughput = outcome.throughput;
                          result.energy_of_best = outcome.energy;
                          result.best_levels = seq;
                        }
                      });
  // Second pass: minimum energy among near-maximal throughput.
  enumerate_sequences(realization, cfg, levels, initial_energy,
                      initial_backlog, 1, 0, current,
                      [&](const std::vector<double>&,
                          const ScheduleOutcome& outcome) {
                        if (outcome.throughput >=
                            result.best_throughput - tp_tolerance)
                          result.min_energy_among_best = std::min(
                              result.min_energy_among_best, outcome.energy);
                      });
  return result;
}

double grid_throughput_bound(const SystemConfig& cfg, double step,
                             double max_gain, int horizon) {
  return horizon * cfg.bits_per_level() * std::log2(1.0 + step * max_gain);
}

double grid_energy_bound(const SystemConfig& cfg, double step, double max_gain,
                         double min_gain, double max_level, int horizon) {
  const double tp_bound = grid_throughput_bound(cfg, step, max_gain, horizon);
  // Steepest bits-per-energy exchange rate over the feasible power range:
  // dE/dbits <= (1 + w*gamma) * ln2 / (sW * gamma), largest at max level
  // and min gain.
  const double marginal = (1.0 + max_level * max_gain) * std::numbers::ln2 /
                          (cfg.bits_per_level() * min_gain);
  return horizon * step + 2.0 * tp_bound * marginal;
}

double gen_dp_oracle(const GenDpSpec& spec, const SystemConfig& cfg,
                     double initial_energy, double initial_backlog) {
  if (spec.horizon > 4 || spec.energy_grid.size() > 20 ||
      spec.backlog_grid.size() > 20)
    throw InstanceTooLarge("generalized DP caps: N <= 4, grids <= 20 points");

  const auto snap = [](const std::vector<double>& grid, double x) {
    std::size_t best = 0;
    double best_dist = std::abs(grid[0] - x);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double d = std::abs(grid[k] - x);
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    return best;
  };

  const std::size_t n_e = spec.energy_grid.size();
  const std::size_t n_b = spec.backlog_grid.size();
  const std::size_t n_g = spec.gain_levels.size();
  const double inf = std::numeric_limits<double>::infinity();

  // The last slot folds the terminal penalty in directly, so the
  // initial next-slot table is never read.
  std::vector<double> next(n_e * n_b * n_g, 0.0);
  std::vector<double> value(n_e * n_b * n_g);
  for (int n = spec.horizon; n >= 1; --n) {
    for (std::size_t ei = 0; ei < n_e; ++ei) {
      for (std::size_t bi = 0; bi < n_b; ++bi) {
        for (std::size_t gi = 0; gi < n_g; ++gi) {
          const double e = spec.energy_grid[ei];
          const double b = spec.backlog_grid[bi];
          const double gain = spec.gain_levels[gi];
          double best = inf;
          for (double power : spec.power_set) {
            const double rate = awgn_rate(power, gain, cfg);
            double fraction = 1.0;
            double consumed = 0.0;
            double delivered = 0.0;
            if (power > 0.0 && rate > 0.0) {
              fraction = std::min({e / power, b / rate, 1.0});
              consumed = std::min(fraction * power, e);
              delivered = std::min(fraction * rate, b);
            }
            if (n == spec.horizon) {
              // Last slot: the terminal backlog is what remains after this
              // transmission; arrivals past the horizon do not count.
              const double retained = b - delivered;
              double terminal = 0.0;
              if (retained > 1e-12)
                terminal = spec.infinite_terminal
                               ? inf
                               : spec.terminal_cost_per_bit * retained;
              if (terminal != inf) best = std::min(best, consumed + terminal);
              continue;
            }
            double expected = 0.0;
            bool infeasible = false;
            for (std::size_t hv = 0; hv < spec.harvest_values.size() && !infeasible; ++hv) {
              const double hp = spec.harvest_probs[hv];
              if (hp == 0.0) continue;
              for (std::size_t av = 0; av < spec.arrival_values.size() && !infeasible; ++av) {
                const double ap = spec.arrival_probs[av];
                if (ap == 0.0) continue;
                const std::size_t ne = snap(
                    spec.energy_grid, e - consumed + spec.harvest_values[hv]);
                const std::size_t nb = snap(
                    spec.backlog_grid, b - delivered + spec.arrival_values[av]);
                for (std::size_t ng = 0; ng < n_g; ++ng) {
                  const double gp = spec.gain_probs[ng];
                  if (gp == 0.0) continue;
                  const double v = next[(ne * n_b + nb) * n_g + ng];
                  if (v == inf) {
                    infeasible = true;
                    break;
                  }
                  expected += hp * ap * gp * v;
                }
              }
            }
            if (infeasible) continue;
            best = std::min(best, consumed + expected);
          }
          value[(ei * n_b + bi) * n_g + gi] = best;
        }
      }
    }
    next = value;
  }

  const std::size_t ei = snap(spec.energy_grid, initial_energy);
  const std::size_t bi = snap(spec.backlog_grid, initial_backlog);
  double expected = 0.0;
  for (std::size_t gi = 0; gi < n_g; ++gi) {
    const double v = next[(ei * n_b + bi) * n_g + gi];
    if (spec.gain_probs[gi] == 0.0) continue;
    if (v == inf) return inf;
    expected += spec.gain_probs[gi] * v;
  }
  return expected;
}

}  // namespace lazysched
