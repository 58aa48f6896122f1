#pragma once

#include <iosfwd>

#include "stalloc/allocation.hpp"
#include "stalloc/mask.hpp"
#include "stalloc/pointprocess.hpp"

namespace stalloc {

// Binary portable pixmap (P6) of a 2D allocation, one pixel per grid cell,
// y increasing upward. Territories are colored by a hash of the owning
// center's index, unclaimed cells are white, tie-flagged cells black (at one
// pixel per cell the "outline" of a tie degenerates to the cell itself), and
// each center is overdrawn as a small dark-red dot. Rejects d != 2.
void renderAllocation(std::ostream& out, const Allocation& alloc, const CenterSet& centers);

// P6 image of a 2D mask: foreground dark, background white.
void renderMask(std::ostream& out, const GridMask& mask);

}  // namespace stalloc
