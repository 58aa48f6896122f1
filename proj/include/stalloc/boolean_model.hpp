#pragma once

#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/grid.hpp"
#include "stalloc/mask.hpp"
#include "stalloc/pointprocess.hpp"

namespace stalloc {

struct BooleanParams {
  double intensity = 0.0;
  double radius = 0.0;
  int dim = 0;
};

// Occupancy of the Boolean model: a cell is covered iff its center point
// lies within `radius` of some center (window metric).
GridMask booleanMask(const CenterSet& centers, double radius, const Grid& grid);

// The Boolean model with radius 1/2 whose law matches that of disks of
// volume alpha around unit-intensity centers: intensity alpha * 2^d / pi_d.
BooleanParams equivalentBooleanParams(double alpha, int d);

// Every cell within this distance of a center is guaranteed claimed at
// appetite alpha: the radius of the volume-alpha ball shaved by a half cell
// diagonal, (alpha/pi_d)^(1/d) - h*sqrt(d). Nonpositive on coarse grids, in
// which case the guarantee is vacuous.
double dominationRadius(double alpha, int d, double h);

// Cells violating the guarantee above: inside some center's shaved ball yet
// unclaimed. Sorted, deduplicated; expected empty.
std::vector<long> dominationCheck(const Allocation& alloc, const CenterSet& centers);

}  // namespace stalloc
