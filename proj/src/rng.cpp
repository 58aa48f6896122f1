#include "stalloc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace stalloc {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SplitMix64 replicaRng(std::uint64_t masterSeed, std::uint64_t replicaIndex) {
  // Weyl-step the index away from the master seed, then finalize twice so the
  // per-replica states are spread over the whole state space. Documented as
  // part of the stream contract: stream(seed, i) is stable forever.
  std::uint64_t s = masterSeed + 0x9E3779B97F4A7C15ULL * (replicaIndex + 1);
  return SplitMix64(mix64(mix64(s) ^ 0xD1B54A32D192ED03ULL));
}

std::uint64_t replicaSeed(std::uint64_t masterSeed, std::uint64_t replicaIndex) {
  return replicaRng(masterSeed, replicaIndex).next();
}

long samplePoissonCount(SplitMix64& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("samplePoissonCount: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  // Count unit-rate arrivals in [0, mean]. uniformOpen01 is strictly inside
  // (0,1), so every gap is strictly positive and the loop always terminates.
  long n = 0;
  double t = 0.0;
  for (;;) {
    t += -std::log(rng.uniformOpen01());
    if (t > mean) return n;
    ++n;
  }
}

}  // namespace stalloc
