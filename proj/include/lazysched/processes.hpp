#pragma once

#include <cstdint>
#include <vector>

namespace lazysched {

// Markov packet-arrival model: state i emits a packet of lengths[i] bits
// at the beginning of each slot and moves according to the row-stochastic
// `transition` matrix.
struct ArrivalChain {
  std::vector<std::vector<double>> transition;
  std::vector<double> lengths;  // bits per state, >= 0
  // Initial state distribution; empty means "start from the stationary
  // distribution".
  std::vector<double> initial_distribution;

  int num_states() const { return static_cast<int>(lengths.size()); }

  // Throws std::invalid_argument naming the broken constraint.
  void validate() const;
};

// Unique stationary distribution of the chain.  Throws
// NoStationaryDistribution when the linear system is singular beyond
// tolerance (reducible chains) or the solution fails the residual check.
std::vector<double> stationary_distribution(const ArrivalChain& chain);

// Mean arrival size per slot under the stationary distribution, in bits.
double mean_arrival_bits(const ArrivalChain& chain);

// Expected bits arriving over the next `ahead` slots starting from state
// `state`: sum_{k=1..ahead} (A^k)_{state,:} . lengths, computed by
// iterated vector-matrix products.  ahead = 0 yields 0.
double expected_future_arrivals(const ArrivalChain& chain, int state,
                                int ahead);

// Energy-harvest model.  `bernoulli`: an independent harvest of `amount`
// energy units with probability p_event each slot.  `two_state_markov`:
// an on/off process that stays in its current state with probability
// p_stay (symmetric, so the stationary event probability is 1/2); the on
// state harvests `amount`.
struct HarvestProcess {
  enum class Kind { kBernoulli, kTwoStateMarkov };
  Kind kind = Kind::kBernoulli;
  double amount = 0.05;  // energy units per event
  double p_event = 0.5;  // bernoulli event probability
  double p_stay = 0.9;   // markov stay probability

  void validate() const;
};

// I.i.d. per-slot channel gain levels (SNR per unit power).
struct FadingProcess {
  std::vector<double> gains;          // > 0
  std::vector<double> probabilities;  // sums to 1

  void validate() const;
};

// One sampled trace of the three processes over the horizon.  Index 0
// holds slot 1.
struct Realization {
  std::vector<double> arrivals;    // bits, B_1..B_N
  std::vector<int> arrival_states; // chain state per slot
  std::vector<double> harvests;    // energy units, H_1..H_N
  std::vector<double> gains;       // gamma_1..gamma_N
  std::uint64_t master_seed = 0;
  std::uint64_t index = 0;

  int horizon() const { return static_cast<int>(arrivals.size()); }
};

}  // namespace lazysched
