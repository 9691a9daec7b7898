#pragma once

#include <stdexcept>
#include <string>

namespace lazysched {

// Thrown by dp_solve when packet lengths or rates do not sit on the
// backlog lattice (non-integral bit counts).
struct LatticeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by dp_rate / value lookups for slots past the horizon.
struct OutOfHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an arrival chain has no unique stationary distribution
// (reducible, or singular beyond tolerance).
struct NoStationaryDistribution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the water-level fixed-point iteration does not meet its
// tolerance within the iteration cap.
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by the brute-force oracles when an instance exceeds the caps
// they are meant for.
struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration parsing/validation failure; `key` names the offending
// entry so CLI diagnostics can point at it.
struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(std::string key_, const std::string& message)
      : std::runtime_error("config key '" + key_ + "': " + message),
        key(std::move(key_)) {}
};

}  // namespace lazysched
