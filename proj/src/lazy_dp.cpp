#include "lazysched/lazy_dp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lazysched/errors.hpp"
#include "lazysched/power.hpp"

namespace lazysched {

namespace {

// Bit counts must be integers for the gcd lattice to make sense.
std::int64_t to_bit_count(double bits, const char* what) {
  const double rounded = std::nearbyint(bits);
  if (bits < 0 || std::abs(bits - rounded) > 1e-9)
    throw LatticeMismatch(std::string(what) +
                          " is not an integral number of bits");
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

std::int64_t DpSolution::point_for(double backlog) const {
  if (backlog <= 0) return 0;
  // Round up so off-lattice queries never under-report the backlog.
  const double points = backlog / static_cast<double>(quantum);
  std::int64_t p = static_cast<std::int64_t>(std::ceil(points - 1e-9));
  return std::min(p, backlog_points - 1);
}

double DpSolution::value_at(int slot, double backlog, int state) const {
  if (slot < 1 || slot > horizon + 1)
    throw OutOfHorizon("value_at: slot " + std::to_string(slot) +
                       " outside 1..N+1");
  return value[value_index(slot, point_for(backlog), state)];
}

double DpSolution::rate_at(int slot, double backlog, int state) const {
  if (slot < 1 || slot > horizon)
    throw OutOfHorizon("rate_at: slot " + std::to_string(slot) +
                       " outside 1..N");
  return candidate_rates[policy[value_index(slot, point_for(backlog), state)]];
}

DpSolution dp_solve(const SystemConfig& cfg, const ArrivalChain& chain,
                    double max_initial_backlog) {
  cfg.validate();
  chain.validate();
  if (cfg.rate_set.empty())
    throw std::invalid_argument("rate_set must not be empty");
  if (cfg.rate_set.size() > 254)
    throw std::invalid_argument("rate_set wider than the policy index type");

  const int n_slots = cfg.horizon_slots;
  const int m = chain.num_states();

  std::vector<std::int64_t> rate_bits;
  for (double r : cfg.rate_set) rate_bits.push_back(to_bit_count(r, "rate"));
  std::vector<std::int64_t> length_bits;
  for (double l : chain.lengths)
    length_bits.push_back(to_bit_count(l, "packet length"));

  std::int64_t quantum = 0;  // rates are positive integers, so gcd >= 1
  for (std::int64_t r : rate_bits) quantum = std::gcd(quantum, r);
  for (std::int64_t l : length_bits) quantum = std::gcd(quantum, l);

  const std::int64_t max_length =
      *std::max_element(length_bits.begin(), length_bits.end());
  const std::int64_t initial_points = static_cast<std::int64_t>(
      std::ceil(std::max(0.0, max_initial_backlog) / quantum - 1e-9));
  // Envelope: initial headroom plus one arrival per slot, plus the
  // terminal arrival subtracted by the penalty.
  const std::int64_t points =
      initial_points + (static_cast<std::int64_t>(n_slots) + 1) *
                           (max_length / quantum) +
      1;

  DpSolution sol;
  sol.horizon = n_slots;
  sol.quantum = quantum;
  sol.backlog_points = points;
  sol.num_states = m;
  sol.candidate_rates.push_back(0.0);
  for (double r : cfg.rate_set) sol.candidate_rates.push_back(r);
  sol.value.assign(static_cast<std::size_t>(n_slots + 1) * points * m, 0.0);
  sol.policy.assign(static_cast<std::size_t>(n_slots) * points * m, 0);

  // Terminal penalty: the arrival of slot N+1 falls outside the horizon,
  // so it is excluded from the retained backlog.
  for (std::int64_t p = 0; p < points; ++p) {
    const double b = static_cast<double>(p * quantum);
    for (int i = 0; i < m; ++i) {
      const double retained = std::max(b - chain.lengths[i], 0.0);
      sol.value[sol.value_index(n_slots + 1, p, i)] =
          terminal_cost(retained, cfg);
    }
  }

  const std::size_t n_rates = sol.candidate_rates.size();
  std::vector<std::int64_t> rate_points(n_rates);
  std::vector<std::int64_t> length_points(m);
  for (std::size_t k = 0; k < n_rates; ++k)
    rate_points[k] = static_cast<std::int64_t>(sol.candidate_rates[k]) / quantum;
  for (int j = 0; j < m; ++j) length_points[j] = length_bits[j] / quantum;

  for (int n = n_slots; n >= 1; --n) {
    const double* next = &sol.value[sol.value_index(n + 1, 0, 0)];
    for (std::int64_t p = 0; p < points; ++p) {
      const double b = static_cast<double>(p * quantum);
      for (int i = 0; i < m; ++i) {
        double best = 0.0;
        std::uint8_t best_rate = 0;
        for (std::size_t k = 0; k < n_rates; ++k) {
          const double spend = energy_per_slot(b, sol.candidate_rates[k], cfg);
          const std::int64_t drained = std::max<std::int64_t>(p - rate_points[k], 0);
          double expected = 0.0;
          for (int j = 0; j < m; ++j) {
            const double prob = chain.transition[i][j];
            if (prob == 0.0) continue;
            std::int64_t next_point =
                std::min(drained + length_points[j], points - 1);
            expected += prob * next[next_point * m + j];
          }
          const double total = spend + expected;
          if (k == 0 || total < best) {
            best = total;
            best_rate = static_cast<std::uint8_t>(k);
          }
        }
        sol.value[sol.value_index(n, p, i)] = best;
        sol.policy[sol.value_index(n, p, i)] = best_rate;
      }
    }
  }
  return sol;
}

double dp_rate(const DpSolution& sol, int slot, double backlog, int state) {
  return sol.rate_at(slot, backlog, state);
}

}  // namespace lazysched
