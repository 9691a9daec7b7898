#include "lazysched/config.hpp"

#include <stdexcept>
#include <string>

namespace lazysched {

void SystemConfig::validate() const {
  if (horizon_slots < 1)
    throw std::invalid_argument("horizon_slots must be >= 1");
  if (!(slot_seconds > 0))
    throw std::invalid_argument("slot_seconds must be > 0");
  if (!(bandwidth_hz > 0))
    throw std::invalid_argument("bandwidth_hz must be > 0");
  if (!(noise_density > 0))
    throw std::invalid_argument("noise_density must be > 0");
  if (!(tau > 0)) throw std::invalid_argument("tau must be > 0");
  if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  if (!(beta > 0) || beta > 1)
    throw std::invalid_argument("beta must be in (0, 1]");
  if (!(power_unit > 0))
    throw std::invalid_argument("power_unit must be > 0");
  double prev = 0.0;
  for (std::size_t k = 0; k < rate_set.size(); ++k) {
    if (!(rate_set[k] > prev))
      throw std::invalid_argument(
          "rate_set must be strictly increasing and positive (entry " +
          std::to_string(k) + ")");
    prev = rate_set[k];
  }
}

std::vector<double> default_rate_set() {
  return {6000, 9000, 12000, 18000, 24000, 36000, 48000, 54000};
}

SystemConfig default_system_config() {
  SystemConfig cfg;
  cfg.rate_set = default_rate_set();
  return cfg;
}

}  // namespace lazysched
