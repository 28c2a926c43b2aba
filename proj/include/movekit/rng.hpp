#pragma once

#include <cstdint>

namespace movekit {

// SplitMix64. Fixed constants keep labelings bit-reproducible across runs
// and across reimplementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Independent stream for (seed, index) pairs: the stream state is one mix
  // step of seed advanced by (index+1) increments.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed + (index + 1) * kIncrement));
  }

  std::uint64_t next() {
    state_ += kIncrement;
    return mix(state_);
  }

  // Uniform in [0, bound); bound >= 1.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace movekit
