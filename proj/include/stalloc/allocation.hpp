#pragma once

#include <cstdint>
#include <vector>

#include "stalloc/grid.hpp"
#include "stalloc/mask.hpp"
#include "stalloc/pointprocess.hpp"

namespace stalloc {

inline constexpr std::int32_t kUnclaimed = -1;

// Outcome of growing every center's ball simultaneously until each has
// captured `quota` cells (or no free cell remains). `owner` maps each grid
// cell to the center that captured it, kUnclaimed if nobody did. A cell whose
// capture involved two or more centers at exactly the same distance keeps the
// deterministic winner as owner and gets a tie flag; such cells stand in for
// the null set where the continuum map is ambiguous.
struct Allocation {
  Grid grid;
  double appetite = 0.0;
  long quota = 0;  // cells each center may claim; realized appetite = quota * h^d
  std::vector<std::int32_t> owner;
  std::vector<std::uint64_t> tieBits;   // packed per-cell equal-distance flag
  std::vector<long> claimed;            // per-center captured cell count
  std::vector<std::uint8_t> sated;      // per-center, 1 iff claimed == quota

  bool disputed(long cell) const {
    return (tieBits[static_cast<std::size_t>(cell >> 6)] >> (cell & 63)) & 1u;
  }
  void markDisputed(long cell) {
    tieBits[static_cast<std::size_t>(cell >> 6)] |= 1ULL << (cell & 63);
  }

  long claimedCellCount() const;
  long disputedCellCount() const;

  // Fraction of centers with a full quota; 1 by convention when there are no
  // centers (vacuously everyone is satisfied).
  double satedFraction() const;
};

// Cells each center may capture: round(appetite / h^d). Rounding to nearest
// keeps the realized appetite unbiased; callers can recover it as
// quota * cellVolume.
long quotaForAppetite(double appetite, const Grid& grid);

// The engine. Considers (cell, center) pairs in globally increasing
// (distance^2, center index, cell index) order and assigns each cell to the
// first still-hungry center that reaches it. Candidate generation is lazy --
// a per-center expanding ring walk over a bucket index -- so memory stays
// near-linear in cells + centers rather than their product.
Allocation computeAllocation(const CenterSet& centers, const Grid& grid, double appetite);

struct UnstablePair {
  long cell;
  int center;
};

// Independent brute-force check against the defining property: no cell may
// prefer a center that would also take it. A cell desires a center strictly
// closer than its current owner (an unclaimed cell desires everyone); a
// center covets any cell strictly closer than its farthest captured cell (an
// unsated center covets everything). Tie-flagged cells are exempt. Exhaustive
// O(cells x centers) -- this is the oracle, not the engine.
std::vector<UnstablePair> verifyStability(const Allocation& alloc, const CenterSet& centers);

// Mask of cells with any owner (tie-flagged cells count as claimed).
GridMask claimedMask(const Allocation& alloc);

}  // namespace stalloc
