#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stalloc/region.hpp"

namespace stalloc {

// A realization of a point process on a Region: the centers that will compete
// for territory. Coordinates are flattened row-major (center k occupies
// coords[k*dim .. k*dim+dim)). `intensity` and `seed` record how the set was
// produced; hand-built sets may fill them with anything meaningful.
struct CenterSet {
  Region region;
  double intensity = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> coords;

  int count() const { return static_cast<int>(coords.size() / region.dim); }
  const double* center(int k) const { return coords.data() + static_cast<std::size_t>(k) * region.dim; }
};

// Homogeneous Poisson sample: count ~ Poisson(intensity * volume), positions
// iid uniform. Deterministic in (region, intensity, seed).
CenterSet samplePoisson(const Region& region, double intensity, std::uint64_t seed);

// Fixed-count uniform sample (binomial process); handy for bounded test cases.
CenterSet sampleUniform(const Region& region, int count, std::uint64_t seed);

// Dilation x -> factor*x. Sides scale by factor, recorded intensity by
// factor^-dim, so the rescaled set is again a unit-consistent realization.
CenterSet rescaleCenters(const CenterSet& cs, double factor);

// Number of centers in the level-m cube K^m_i, the half-open cube
// [m*i_l - m/2, m*i_l + m/2) per axis. Cubes that miss the window just
// count zero.
long countInCube(const CenterSet& cs, const std::vector<long>& index, double m);

// Text round-trip: header "d intensity seed topology sides...", then one
// center per line at 17 significant digits (enough to restore the exact
// doubles).
void writeCenterSet(std::ostream& out, const CenterSet& cs);
CenterSet readCenterSet(std::istream& in);

}  // namespace stalloc
