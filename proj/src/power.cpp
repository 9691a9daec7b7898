#include "lazysched/power.hpp"

#include <algorithm>
#include <cmath>

namespace lazysched {

double power_of_rate(double rate, const SystemConfig& cfg) {
  if (rate <= 0) return 0.0;
  const double spectral = rate / cfg.bits_per_level();
  return cfg.noise_density * cfg.bandwidth_hz * (std::exp2(spectral) - 1.0);
}

double energy_per_slot(double backlog, double rate, const SystemConfig& cfg) {
  if (rate <= 0 || backlog <= 0) return 0.0;
  const double fraction = std::min(backlog / rate, 1.0);
  return cfg.slot_seconds * power_of_rate(rate, cfg) * fraction;
}

double terminal_cost(double backlog, const SystemConfig& cfg) {
  if (backlog <= 0) return 0.0;
  return cfg.tau * cfg.slot_seconds * power_of_rate(backlog / cfg.tau, cfg);
}

}  // namespace lazysched
