#pragma once

#include <cstdint>
#include <span>

namespace lazysched {

// Deterministic splittable random stream.  A stream is identified by
// (master_seed, stream_index, purpose): the identifying triple is hashed
// into an initial state and outputs walk the splitmix64 sequence from
// there.  Streams are independent of the order in which they are created
// or consumed, so parallel workers drawing from per-realization streams
// reproduce the single-threaded results exactly.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index,
            std::uint64_t purpose) {
    state_ = mix(master_seed + kGolden);
    state_ = mix(state_ ^ (stream_index + kGolden));
    state_ = mix(state_ ^ (purpose + kGolden));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Index sampled from an (approximately normalized) discrete
  // distribution; the final index absorbs any rounding slack.
  int categorical(std::span<const double> probabilities) {
    const double u = uniform01();
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < probabilities.size(); ++k) {
      cumulative += probabilities[k];
      if (u < cumulative) return static_cast<int>(k);
    }
    return static_cast<int>(probabilities.size()) - 1;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

// Stream purposes, one per stochastic process.
enum class StreamPurpose : std::uint64_t {
  kArrivals = 1,
  kHarvests = 2,
  kGains = 3,
};

}  // namespace lazysched
