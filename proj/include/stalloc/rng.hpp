#pragma once

#include <cstdint>

namespace stalloc {

// SplitMix64 (Steele/Lea/Flood). Picked over std::mt19937 because the whole
// state is one word, seeding is trivial, and the output finalizer makes
// nearby seeds produce unrelated streams -- which is exactly what we need to
// derive one independent stream per replica from (master seed, index).
// It also has no implementation-defined behaviour, so the same seed gives the
// same bytes on every build; std::poisson_distribution would not.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }

  // Uniform in [0, 1): 53 random bits, the usual mantissa trick.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform strictly inside (0, 1); safe to feed to log().
  double uniformOpen01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// One SplitMix64 finalizer round; used to spread structured seed material.
std::uint64_t mix64(std::uint64_t x);

// Independent stream for one replica of an experiment. Streams for distinct
// indices start from finalized, well-separated states, so replica results do
// not depend on which worker ran them or in what order.
SplitMix64 replicaRng(std::uint64_t masterSeed, std::uint64_t replicaIndex);

// First word of the replica stream, for callers that want a single derived
// seed rather than a whole generator.
std::uint64_t replicaSeed(std::uint64_t masterSeed, std::uint64_t replicaIndex);

// Poisson count by accumulating unit-rate exponential gaps until `mean` is
// passed. O(mean) per draw, which is fine for the window sizes we use, and
// bit-stable across platforms unlike the library distribution.
long samplePoissonCount(SplitMix64& rng, double mean);

}  // namespace stalloc
