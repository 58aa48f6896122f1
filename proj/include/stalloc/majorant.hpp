#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/mask.hpp"
#include "stalloc/pointprocess.hpp"
#include "stalloc/region.hpp"

// Coarse-grained analysis layer: the window is covered by unit cubes centered
// at integer lattice points, every center is binned into its cube, and each
// occupied cube gets a "reach radius" R_i -- the smallest r such that the
// number of centers within lattice distance beta_d*r of cube i is at most
// pi_d*r^d. Painting a ball of radius R_i around every occupied cube yields a
// mask that dominates the allocation's claimed set, which is what makes the
// coarse model useful: its connectivity bounds the fine model's connectivity
// from above.

namespace stalloc {

// Volume of the unit ball in d dimensions.
double unitBallVolume(int d);

// Lattice search factor beta_d = ceil(3 + 2*sqrt(d)*pi_d^(1/d)). Reach radii
// are defined through balls inflated by this factor; it is the smallest
// integer that makes the separation argument behind the domination property
// go through.
int searchFactor(int d);

// Unit cubes covering the window. Cube i occupies [i-1/2, i+1/2) per axis.
// A box window of side L touches cubes 0..floor(L+1/2); a torus window must
// have integer sides so the cubes tile it exactly (validated).
struct CubeLattice {
  Region region;
  std::vector<long> dims;  // cube indices per axis: box 0..dims-1, torus wraps
  long cubeCount = 0;

  explicit CubeLattice(const Region& region);

  long flatten(const std::vector<long>& iv) const;
  void unflatten(long flat, std::vector<long>& iv) const;
  // Cube containing a point of the window (torus: wrapped into range).
  std::vector<long> cubeOfPoint(const double* x) const;
  // Squared distance between the closed cubes at iv and jv as subsets of the
  // window: per axis max(0, |delta|-1)^2 with delta wrapped on a torus.
  // Always an integer.
  long setDistanceSq(const std::vector<long>& iv, const std::vector<long>& jv) const;
};

// Per-cube center counts plus the list of occupied cubes (flat indices,
// ascending). Counts sum to the center count.
struct CubeField {
  CubeLattice lattice;
  std::vector<long> count;
  std::vector<long> occupied;
};

CubeField countField(const CenterSet& centers);

// Reach radius of cube i: 0 if the cube is empty, otherwise the smallest
// r > 0 with sum of counts over cubes within set distance beta_d*r of i
// at most pi_d*r^d. The count is a step function of r and the volume side is
// continuous increasing, so the infimum is found exactly by scanning the
// lattice-distance breakpoints in order. Every occupied cube has
// R_i >= pi_d^(-1/d); with counts truncated to the window the radius is
// always finite (it saturates at (total/pi_d)^(1/d)).
double reachRadius(const CubeField& zeta, const std::vector<long>& iv);

struct ReachField {
  CubeLattice lattice;
  std::vector<double> r;  // per cube, 0 for empty cubes
  double maxReach = 0.0;
};

ReachField reachField(const CubeField& zeta);

// Painted mask: the union over occupied cubes of the cube-ball of radius R_i.
GridMask paintedSet(const ReachField& reach);

// Centers lying in the half-open box [lo, hi) per axis; everything else
// dropped. Used to build the restricted painted set of a sub-window.
CenterSet restrictCenters(const CenterSet& centers, const std::vector<double>& lo,
                          const std::vector<double>& hi);

// Claimed cells coarsened to cubes: a cube is marked if any grid cell whose
// center point lies in it is claimed.
GridMask claimedCubes(const Allocation& alloc);

// A claimed cell whose center point falls outside the painted ball of its
// owner's cube. With unit appetite the domination property says there are
// none; the checker reports rather than asserts.
struct ContainmentViolation {
  long cell;
  int center;
};

std::vector<ContainmentViolation> verifyContainment(const Allocation& alloc,
                                                    const CenterSet& centers,
                                                    const ReachField& reach);

// Verdict for one level-m cube. The cube passes when (i) the painted set
// rebuilt from only the centers inside the 3^d-block neighborhood around it
// has a connected component of l-infinity extent at least m/2 that overlaps
// the cube, and (ii) every unit cube in that neighborhood has reach radius
// (from the full configuration) below m/(6*(beta_d+1)).
struct PassableVerdict {
  std::vector<long> index;
  double m = 0.0;
  bool wideComponent = false;  // condition (i)
  bool smallReach = false;     // condition (ii)
  bool passable = false;       // (i) and (ii)
};

// Block connectivity uses face adjacency by default; face+corner is the
// topological alternative (cubes meeting only at a corner still connected).
PassableVerdict isPassable(const std::vector<long>& j, double m,
                           const CenterSet& centers,
                           Adjacency adjacency = Adjacency::Face);

struct PmEstimate {
  double m = 0.0;
  double lambda = 0.0;
  long replicas = 0;
  long successes = 0;
  double pHat = 0.0;
  double ciLo = 0.0;
  double ciHi = 0.0;
};

// Monte Carlo estimate of the probability that a level-m cube is passable,
// over independent intensity-lambda configurations on a d-dimensional box
// window holding the cube's neighborhood with margin m/2 (enough that the
// verdict matches the infinite-volume one). Wilson 95% interval.
PmEstimate estimatePm(int d, double m, double lambda, long replicas,
                      std::uint64_t seed, Adjacency adjacency = Adjacency::Face,
                      int threads = 1);

// Upper bound on P[reach radius of an occupied cube exceeds a] at intensity
// lambda: exp{-lambda*(2*beta_d*a+3)^d * g(x)} with
// x = lambda*(2*beta_d*a+3)^d / (pi_d*a^d) and g(x) = (x-1-log x)/x.
// Informative only for x < 1; clamps to 1 otherwise.
double chernoffTailBound(double a, double lambda, int d);

// Checks that the verdict of {R_i <= a} is unchanged after deleting every
// center outside the cube-ball of radius beta_d*a around i. True on every
// configuration: counts at distances relevant to radii <= a are identical.
bool verifyLocality(const std::vector<long>& iv, double a, const CenterSet& centers);

// Dump/reload in the snapshot container style: text header, "end-header",
// dense little-endian arrays.
void writeReachField(std::ostream& out, const ReachField& reach);
ReachField readReachField(std::istream& in);
void writePaintedMask(std::ostream& out, const GridMask& mask, const Region& region);
GridMask readPaintedMask(std::istream& in);

}  // namespace stalloc
