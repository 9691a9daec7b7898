#pragma once

#include <cmath>
#include <vector>

namespace lazysched {

// Aggregate results of one closed-loop run.
//
// For the basic problem energies are joules; for the generalized problem
// they are normalized energy units (power-unit-slots).  Throughput in
// Mbit/s uses the configured slot length.
struct RunMetrics {
  int horizon = 0;
  double total_energy = 0.0;
  double terminal_penalty = 0.0;  // basic problem only
  double total_cost = 0.0;        // energy + terminal penalty
  double delivered_bits = 0.0;
  double total_arrived_bits = 0.0;  // includes the initial backlog
  double backlog_end_bits = 0.0;
  double backlog_percentage = 0.0;
  double avg_throughput_bits_per_slot = 0.0;
  double avg_throughput_mbps = 0.0;
  double energy_per_slot = 0.0;
  std::vector<double> per_slot_energy;     // filled by the simulators
  std::vector<double> per_slot_delivered;  // filled by the simulators
};

// Ledger quantization for the generalized problem.
//
// Delivered bits and consumed energy are snapped to fixed binary lattices
// (2^-20 bits, 2^-40 energy units) before they enter the accounting, so
// every ledger sum and comparison is exact in double precision: all
// ledger values are lattice multiples and stay far below 2^53 quanta.
// Bit conservation and energy causality then hold with zero tolerance.
inline double quantize_bits(double bits) {
  return std::nearbyint(bits * 0x1.0p20) * 0x1.0p-20;
}
inline double quantize_energy(double energy) {
  return std::nearbyint(energy * 0x1.0p40) * 0x1.0p-40;
}

}  // namespace lazysched
