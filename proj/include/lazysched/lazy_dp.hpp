#pragma once

#include <cstdint>
#include <vector>

#include "lazysched/config.hpp"
#include "lazysched/processes.hpp"

namespace lazysched {

// Backward-induction solution of the basic lazy-scheduling problem.
//
// The backlog state lives on a lattice whose quantum is the gcd of all
// rates and packet lengths (in bits), so the dynamics
// b' = (b - r)_+ + l(j) are closed on the lattice and no interpolation is
// needed.  Value tables cover slots 1..N+1 (slot N+1 is the terminal
// penalty), policy tables slots 1..N.
//
// State convention: the backlog at slot n includes the packet that
// arrived at the beginning of slot n, and the chain state i is the state
// that produced that packet.
struct DpSolution {
  int horizon = 0;                   // N
  std::int64_t quantum = 0;          // bits per lattice step
  std::int64_t backlog_points = 0;   // lattice size
  int num_states = 0;                // arrival chain states
  std::vector<double> candidate_rates;  // {0} followed by the rate set
  std::vector<double> value;            // (N+1) x points x states
  std::vector<std::uint8_t> policy;     // N x points x states, rate index

  // Expected cost-to-go J_n(b, i) in joules.  Off-lattice backlogs are
  // rounded up to the next lattice point and saturate at the table top;
  // slots run 1..N+1.
  double value_at(int slot, double backlog, int state) const;

  // Stored minimizing rate (bits/slot) for slot n = 1..N.
  double rate_at(int slot, double backlog, int state) const;

 private:
  std::size_t value_index(int slot, std::int64_t point, int state) const {
    return (static_cast<std::size_t>(slot - 1) * backlog_points + point) *
               num_states +
           state;
  }
  std::int64_t point_for(double backlog) const;
  friend DpSolution dp_solve(const SystemConfig&, const ArrivalChain&, double);
  friend double dp_rate(const DpSolution&, int, double, int);
};

// Solves the finite-horizon minimum-expected-energy recursion
//   J_n(b,i) = min_r [ e(b,r) + sum_j A_ij J_{n+1}((b-r)_+ + l(j), j) ]
// over candidate rates {0} union V, with terminal penalty
// J_{N+1}(b,i) = C((b - l(i))_+).  Ties pick the smaller rate.
//
// `max_initial_backlog` extends the lattice so slot-1 states with backlog
// up to that value (on top of the arrival envelope) can be queried.
// Throws LatticeMismatch when any rate or packet length is not a positive
// integer number of bits.
DpSolution dp_solve(const SystemConfig& cfg, const ArrivalChain& chain,
                    double max_initial_backlog = 0.0);

// Minimizing rate for slot n; throws OutOfHorizon when n > N.
double dp_rate(const DpSolution& sol, int slot, double backlog, int state);

}  // namespace lazysched
