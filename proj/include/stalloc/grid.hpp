#pragma once

#include <vector>

#include "stalloc/region.hpp"

namespace stalloc {

// Uniform discretization of a Region into cells of side h. h must divide
// every side (checked to 1e-9 relative); cell centers sit at (k + 1/2) * h.
// Flat indices are row-major with axis 0 fastest, so in 2D consecutive flat
// indices walk along x.
struct Grid {
  Region region;
  double h = 0.0;
  std::vector<long> cells;  // cells per axis
  long cellCount = 0;

  Grid() = default;
  Grid(const Region& r, double h);

  void cellVector(long flat, long* iv) const;
  long flatIndex(const long* iv) const;

  // The axis argument is carried for call-site clarity; the step is isotropic.
  double cellCenter(int /*axis*/, long ivAxis) const {
    return (static_cast<double>(ivAxis) + 0.5) * h;
  }
  void cellPoint(long flat, double* out) const;

  // Cell containing a point of the region (half-open cells, clamped to range).
  long cellOfPoint(const double* x) const;

  double cellVolume() const;
};

}  // namespace stalloc
