#pragma once

#include "lazysched/config.hpp"

namespace lazysched {

// Transmit power (watts) needed to sustain `rate` bits/slot on the AWGN
// channel: p(r) = N0 * W * (2^(r / (s*W)) - 1).  Convex, increasing,
// p(0) = 0.
double power_of_rate(double rate, const SystemConfig& cfg);

// Energy (joules) spent in one slot transmitting a backlog of `backlog`
// bits at `rate` bits/slot: s * p(r) * min(b/r, 1).  The min covers the
// partial slot when the buffer drains before the slot ends.
double energy_per_slot(double backlog, double rate, const SystemConfig& cfg);

// Penalty (joules) for retaining `backlog` bits at the end of the
// horizon: the energy of draining them at constant rate b/tau over tau
// extra slots, tau * s * p(b/tau).
double terminal_cost(double backlog, const SystemConfig& cfg);

}  // namespace lazysched
