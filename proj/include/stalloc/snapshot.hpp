#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "stalloc/allocation.hpp"
#include "stalloc/pointprocess.hpp"

namespace stalloc {

// Self-contained dump of one allocation: a text header (window, grid step,
// appetite, quota, seed, RNG and engine identifiers), then dense
// little-endian arrays -- per-cell owners, the disputed bitset, the
// per-center status table, and the center coordinates. Lossless round-trip.
struct Snapshot {
  Allocation alloc;
  CenterSet centers;
  std::uint64_t seed = 0;
  std::string rngId;
  std::string engineVersion;
};

void writeSnapshot(std::ostream& out, const Allocation& alloc, const CenterSet& centers);
Snapshot readSnapshot(std::istream& in);

}  // namespace stalloc
