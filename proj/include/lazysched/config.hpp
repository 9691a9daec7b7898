#pragma once

#include <vector>

namespace lazysched {

// System-wide constants shared by both scheduling problems.
//
// Unit conventions:
//  - Rates are bits per slot throughout.  A rate of 6000 bits/slot with a
//    1 ms slot is 6 Mbit/s.
//  - The basic (lazy) problem works in SI units: powers in watts, energies
//    in joules.
//  - The generalized problem works in normalized units: the channel gain
//    `gamma` is SNR per unit transmit power, so 1/gamma is a power in
//    "power units", water levels and powers are in power units, and
//    energies (battery, harvests) are in power-unit-slots.  `power_unit`
//    records how many watts one power unit is, for reporting only.
struct SystemConfig {
  int horizon_slots = 100;         // N
  double slot_seconds = 1e-3;      // s
  double bandwidth_hz = 2e7;       // W
  double noise_density = 0.83e-9;  // N0, W/Hz
  std::vector<double> rate_set;    // V, bits/slot, strictly increasing, > 0
  double tau = 3.0;                // terminal-cost drain length, slots
  double alpha = 3.0;              // ETLS horizon extension, slots
  double beta = 0.2;               // smoothing factor, (0, 1]
  double power_unit = 1e-3;        // watts per normalized power unit

  // sW: bits per slot per unit of log2(1 + SNR).
  double bits_per_level() const { return slot_seconds * bandwidth_hz; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// The 802.11g rate set from the default experiment setup, in bits/slot
// at a 1 ms slot: 6, 9, 12, 18, 24, 36, 48, 54 Mbit/s.
std::vector<double> default_rate_set();

// Configuration used by the default experiments (see README for the
// provenance of each constant).
SystemConfig default_system_config();

}  // namespace lazysched
