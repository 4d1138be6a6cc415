#pragma once

#include <cstdint>

namespace gnep {

// SplitMix64. One independent stream per random decision class so that adding
// draws to one class never perturbs another (instance generation must be
// bit-identical across runs and library versions).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] by rejection; exact for hi - lo < 2^63.
  long long next_int(long long lo, long long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return lo + static_cast<long long>(v % span);
  }

 private:
  std::uint64_t state_;
};

// Derives the stream for one decision class from the instance seed.
inline SplitMix64 stream(std::uint64_t seed, std::uint64_t decision_class) {
  return SplitMix64(seed ^ ((decision_class + 1) * 0x9E3779B97F4A7C15ULL));
}

// Decision classes used by the generator and the multistart driver.
enum StreamId : std::uint64_t {
  kStreamEdges = 0,
  kStreamPairs = 1,
  kStreamCapacities = 2,
  kStreamDemands = 3,
  kStreamCosts = 4,
  kStreamStarts = 5,
  kStreamDescent = 6,
  kStreamFalsifier = 7,
};

}  // namespace gnep
