#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>
#include <stdexcept>

#include "stalloc/allocation.hpp"
#include "stalloc/grid.hpp"
#include "stalloc/majorant.hpp"
#include "stalloc/pointprocess.hpp"
#include "stalloc/region.hpp"
#include "stalloc/rng.hpp"

using namespace stalloc;

namespace {

// ---------------------------------------------------------------------------
// Oracles. bruteReach gathers the (set distance, cumulative count) staircase
// by scanning every cube of the lattice -- no histograms, no sorting tricks --
// and then evaluates the same interval formula the engine uses, term for
// term. Agreement must therefore be exact to the last bit, which pins down
// the engine's two internal gather paths at once. bruteDemand is the raw
// counting side of the definition, used to check the returned radius is
// feasible and minimal in the semantic sense.
// ---------------------------------------------------------------------------

double bruteReach(const CubeField& f, const std::vector<long>& iv) {
  if (f.count[static_cast<std::size_t>(f.lattice.flatten(iv))] == 0) return 0.0;
  const int d = f.lattice.region.dim;
  const double beta = static_cast<double>(searchFactor(d));
  const double pid = unitBallVolume(d);

  std::map<long, long> stair;
  std::vector<long> jv(static_cast<std::size_t>(d));
  for (long flat = 0; flat < f.lattice.cubeCount; ++flat) {
    if (f.count[static_cast<std::size_t>(flat)] == 0) continue;
    f.lattice.unflatten(flat, jv);
    stair[f.lattice.setDistanceSq(iv, jv)] += f.count[static_cast<std::size_t>(flat)];
  }
  std::vector<std::pair<long, long>> steps(stair.begin(), stair.end());
  long cum = 0;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    cum += steps[t].second;
    double lo = std::sqrt(static_cast<double>(steps[t].first)) / beta;
    double root = std::pow(static_cast<double>(cum) / pid, 1.0 / d);
    double cand = std::max(lo, root);
    if (t + 1 == steps.size()) return cand;
    if (cand < std::sqrt(static_cast<double>(steps[t + 1].first)) / beta) return cand;
  }
  return 0.0;
}

long bruteDemand(const CubeField& f, const std::vector<long>& iv, double radius) {
  const double rr = radius * radius;
  std::vector<long> jv(static_cast<std::size_t>(f.lattice.region.dim));
  long total = 0;
  for (long flat = 0; flat < f.lattice.cubeCount; ++flat) {
    if (f.count[static_cast<std::size_t>(flat)] == 0) continue;
    f.lattice.unflatten(flat, jv);
    if (static_cast<double>(f.lattice.setDistanceSq(iv, jv)) <= rr)
      total += f.count[static_cast<std::size_t>(flat)];
  }
  return total;
}

CenterSet singleCenter(const Region& region, double x, double y) {
  return CenterSet{region, 0.0, 0, {x, y}};
}

}  // namespace

TEST_CASE("unit ball volumes match the classical values") {
  CHECK(unitBallVolume(1) == 2.0);
  CHECK(unitBallVolume(2) == doctest::Approx(3.14159265358979312).epsilon(1e-15));
  CHECK(unitBallVolume(3) == doctest::Approx(4.18879020478639053).epsilon(1e-15));
  CHECK(unitBallVolume(4) == doctest::Approx(4.93480220054467931).epsilon(1e-15));
  CHECK(unitBallVolume(5) == doctest::Approx(5.26378901391432435).epsilon(1e-15));
  CHECK_THROWS_AS(unitBallVolume(0), std::invalid_argument);
}

TEST_CASE("the search factor is 9 in low dimension") {
  CHECK(searchFactor(2) == 9);
  CHECK(searchFactor(3) == 9);
  CHECK(searchFactor(4) == 9);
  CHECK(searchFactor(5) == 10);
  CHECK_THROWS_AS(searchFactor(1), std::invalid_argument);
}

TEST_CASE("cube lattice geometry") {
  CubeLattice torus(Region::torus({10.0, 10.0}));
  CHECK(torus.dims == std::vector<long>{10, 10});
  CubeLattice box(Region::box({10.0, 10.0}));
  CHECK(box.dims == std::vector<long>{11, 11});  // cubes 0..10 touch the window
  CHECK_THROWS_AS(CubeLattice(Region::torus({10.5, 10.0})), std::invalid_argument);

  double a[2] = {0.49, 0.0};
  CHECK(torus.cubeOfPoint(a) == std::vector<long>{0, 0});
  double b[2] = {0.5, 0.0};
  CHECK(torus.cubeOfPoint(b) == std::vector<long>{1, 0});
  double c[2] = {9.7, 0.2};
  CHECK(torus.cubeOfPoint(c) == std::vector<long>{0, 0});  // wraps
  CHECK(box.cubeOfPoint(c) == std::vector<long>{10, 0});

  CHECK(torus.setDistanceSq({0, 0}, {0, 0}) == 0);
  CHECK(torus.setDistanceSq({0, 0}, {1, 1}) == 0);   // closed cubes touch
  CHECK(torus.setDistanceSq({0, 0}, {3, 4}) == 13);  // 2^2 + 3^2
  CHECK(torus.setDistanceSq({0, 0}, {9, 0}) == 0);   // adjacent through the wrap
  CHECK(box.setDistanceSq({0, 0}, {9, 0}) == 64);
}

TEST_CASE("count field bins every center exactly once") {
  Region region = Region::torus({12.0, 12.0});
  CenterSet cs = samplePoisson(region, 0.8, 31);
  CubeField f = countField(cs);
  long total = 0;
  for (long flat = 0; flat < f.lattice.cubeCount; ++flat) {
    long n = f.count[static_cast<std::size_t>(flat)];
    CHECK(n >= 0);
    total += n;
    bool listed = std::binary_search(f.occupied.begin(), f.occupied.end(), flat);
    CHECK(listed == (n > 0));
  }
  CHECK(total == cs.count());
  CHECK(std::is_sorted(f.occupied.begin(), f.occupied.end()));
}

TEST_CASE("reach radius equals the exhaustive staircase scan bit for bit") {
  // Sparse and dense intensities push the engine through both of its gather
  // paths; the oracle has only one path, so both must match it exactly.
  struct Case {
    Region region;
    double lambda;
    std::uint64_t seed;
  };
  std::vector<Case> cases{{Region::torus({20.0, 20.0}), 0.05, 1},
                          {Region::torus({20.0, 20.0}), 1.5, 2},
                          {Region::box({15.0, 15.0}), 0.05, 3},
                          {Region::box({15.0, 15.0}), 0.9, 4},
                          {Region::torus({6.0, 6.0, 6.0}), 0.3, 5}};
  for (const Case& c : cases) {
    CubeField f = countField(samplePoisson(c.region, c.lambda, c.seed));
    std::vector<long> iv(static_cast<std::size_t>(c.region.dim));
    for (long flat = 0; flat < f.lattice.cubeCount; ++flat) {
      f.lattice.unflatten(flat, iv);
      CHECK(reachRadius(f, iv) == bruteReach(f, iv));
    }
  }
}

TEST_CASE("reach radius solves its defining inequality minimally") {
  Region region = Region::torus({16.0, 16.0});
  const int d = 2;
  const double beta = static_cast<double>(searchFactor(d));
  const double pid = unitBallVolume(d);
  CubeField f = countField(samplePoisson(region, 0.6, 9));
  std::vector<long> iv(2);
  for (long k = 0; k < static_cast<long>(f.occupied.size()); ++k) {
    f.lattice.unflatten(f.occupied[static_cast<std::size_t>(k)], iv);
    double r = reachRadius(f, iv);
    REQUIRE(r > 0.0);
    // Feasible at r: demand inside the inflated ball fits the volume budget.
    double supply = pid * std::pow(r, d);
    CHECK(static_cast<double>(bruteDemand(f, iv, beta * r)) <= supply * (1.0 + 1e-9));
    // Infeasible strictly below r.
    for (double frac : {0.999, 0.7, 0.3}) {
      double s = frac * r;
      CHECK(static_cast<double>(bruteDemand(f, iv, beta * s)) >=
            pid * std::pow(s, d) * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("isolated and clustered cubes have the known closed-form radii") {
  Region region = Region::torus({20.0, 20.0});
  {
    CubeField f = countField(singleCenter(region, 10.2, 10.3));
    CHECK(reachRadius(f, {10, 10}) == doctest::Approx(0.5641895835477563).epsilon(1e-15));
    CHECK(reachRadius(f, {3, 3}) == 0.0);  // empty cube
  }
  {
    // Nine centers spread over the 3x3 block of touching cubes: all at set
    // distance zero, so the radius solves pi r^2 = 9.
    CenterSet cs{region, 0.0, 0, {}};
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        cs.coords.push_back(10.0 + dx);
        cs.coords.push_back(10.0 + dy);
      }
    CubeField f = countField(cs);
    CHECK(reachRadius(f, {10, 10}) == doctest::Approx(1.692568750643269).epsilon(1e-15));
  }
}

TEST_CASE("reach field agrees with per-cube queries") {
  Region region = Region::torus({14.0, 14.0});
  CubeField f = countField(samplePoisson(region, 0.5, 77));
  ReachField rf = reachField(f);
  double maxSeen = 0.0;
  std::vector<long> iv(2);
  for (long flat = 0; flat < f.lattice.cubeCount; ++flat) {
    f.lattice.unflatten(flat, iv);
    double want = reachRadius(f, iv);
    CHECK(rf.r[static_cast<std::size_t>(flat)] == want);
    maxSeen = std::max(maxSeen, want);
  }
  CHECK(rf.maxReach == maxSeen);
}

TEST_CASE("adding centers never shrinks a reach radius") {
  Region region = Region::torus({16.0, 16.0});
  CenterSet sub = samplePoisson(region, 0.4, 100);
  CenterSet super = sub;
  CenterSet extra = samplePoisson(region, 0.4, 200);
  super.coords.insert(super.coords.end(), extra.coords.begin(), extra.coords.end());
  ReachField lo = reachField(countField(sub));
  ReachField hi = reachField(countField(super));
  for (std::size_t i = 0; i < lo.r.size(); ++i)
    if (lo.r[i] > 0.0) CHECK(lo.r[i] <= hi.r[i] + 1e-12);
}

TEST_CASE("restriction keeps exactly the centers of the sub-window") {
  Region region = Region::box({20.0, 20.0});
  CenterSet cs = samplePoisson(region, 0.7, 12);
  std::vector<double> lo{5.0, 4.0}, hi{15.0, 16.0};
  CenterSet cut = restrictCenters(cs, lo, hi);
  long expect = 0;
  for (int k = 0; k < cs.count(); ++k) {
    const double* x = cs.center(k);
    if (x[0] >= 5.0 && x[0] < 15.0 && x[1] >= 4.0 && x[1] < 16.0) ++expect;
  }
  CHECK(cut.count() == expect);
  for (int k = 0; k < cut.count(); ++k) {
    const double* x = cut.center(k);
    CHECK(x[0] >= 5.0);
    CHECK(x[0] < 15.0);
    CHECK(x[1] >= 4.0);
    CHECK(x[1] < 16.0);
  }
}

TEST_CASE("the painted set of a restricted configuration is contained in the full one") {
  Region region = Region::box({24.0, 24.0});
  for (std::uint64_t seed : {41ULL, 42ULL, 43ULL}) {
    CenterSet cs = samplePoisson(region, 0.8, seed);
    CenterSet cut = restrictCenters(cs, {6.0, 6.0}, {18.0, 18.0});
    GridMask part = paintedSet(reachField(countField(cut)));
    GridMask whole = paintedSet(reachField(countField(cs)));
    CHECK(part.subsetOf(whole));
  }
}

TEST_CASE("painted balls have the advertised discrete shapes") {
  Region region = Region::torus({20.0, 20.0});
  CubeLattice lat(region);
  auto paintedCount = [&](double r) {
    ReachField rf{CubeLattice(region), std::vector<double>(static_cast<std::size_t>(lat.cubeCount), 0.0), r};
    rf.r[static_cast<std::size_t>(lat.flatten({10, 10}))] = r;
    return paintedSet(rf).countTrue();
  };
  CHECK(paintedCount(0.5) == 9);    // only the touching cubes
  CHECK(paintedCount(1.0) == 21);   // plus the next shell minus its corners
  CHECK(paintedCount(1.49) == 25);  // the full 5x5 block
  // An isolated center paints just the 3x3 block around its cube.
  GridMask mask = paintedSet(reachField(countField(singleCenter(region, 10.2, 10.3))));
  CHECK(mask.countTrue() == 9);
}

TEST_CASE("claimed cubes coarsen the allocation faithfully") {
  Region region = Region::torus({10.0, 10.0});
  Grid grid(region, 0.25);
  CenterSet cs = samplePoisson(region, 0.6, 5);
  Allocation alloc = computeAllocation(cs, grid, 1.0);
  GridMask cubes = claimedCubes(alloc);
  CubeLattice lat(region);
  GridMask want(lat.dims, region.topology);
  std::vector<double> pt(2);
  for (long cell = 0; cell < grid.cellCount; ++cell) {
    if (alloc.owner[static_cast<std::size_t>(cell)] == kUnclaimed) continue;
    grid.cellPoint(cell, pt.data());
    want.set(lat.flatten(lat.cubeOfPoint(pt.data())), true);
  }
  CHECK(cubes.v == want.v);
}

TEST_CASE("unit-appetite claims stay inside the painted majorant") {
  for (std::uint64_t seed : {60ULL, 61ULL, 62ULL}) {
    Region region = Region::torus({10.0, 10.0});
    Grid grid(region, 0.1);
    CenterSet cs = samplePoisson(region, 1.0, seed);
    Allocation alloc = computeAllocation(cs, grid, 1.0);
    ReachField rf = reachField(countField(cs));
    CHECK(verifyContainment(alloc, cs, rf).empty());
    CHECK(claimedCubes(alloc).subsetOf(paintedSet(rf)));
  }
}

TEST_CASE("painted balls are separated from the far side of their inflated balls") {
  // For each occupied cube i: any cube inside the ball of radius R_i and any
  // cube outside the ball of radius beta*R_i are farther apart than R_i.
  Region region = Region::torus({12.0, 12.0});
  CubeField f = countField(samplePoisson(region, 0.5, 8));
  ReachField rf = reachField(f);
  const double beta = static_cast<double>(searchFactor(2));
  std::vector<long> iv(2), jv(2), kv(2);
  for (long i : f.occupied) {
    f.lattice.unflatten(i, iv);
    double r = rf.r[static_cast<std::size_t>(i)];
    double rr = r * r, brr = (beta * r) * (beta * r);
    for (long j = 0; j < f.lattice.cubeCount; ++j) {
      f.lattice.unflatten(j, jv);
      if (static_cast<double>(f.lattice.setDistanceSq(iv, jv)) > rr) continue;
      for (long k = 0; k < f.lattice.cubeCount; ++k) {
        f.lattice.unflatten(k, kv);
        if (static_cast<double>(f.lattice.setDistanceSq(iv, kv)) <= brr) continue;
        CHECK(static_cast<double>(f.lattice.setDistanceSq(jv, kv)) > rr);
      }
    }
  }
}

TEST_CASE("a wide connected chain with small radii makes a block passable") {
  // Sixteen centers in a row, 4 apart, centered in the level-120 cube at
  // block index (2,2) of a 480 box. Every reach radius stays below
  // 120/(6*10) = 2, each center paints at least the 3x3 block around its
  // cube, consecutive paints overlap or touch, and the chain spans 63 > 60
  // cubes. Both conditions check out by hand.
  Region region = Region::box({480.0, 480.0});
  CenterSet cs{region, 0.0, 0, {}};
  for (int k = 0; k < 16; ++k) {
    cs.coords.push_back(208.0 + 4.0 * k);
    cs.coords.push_back(240.0);
  }
  PassableVerdict v = isPassable({2, 2}, 120.0, cs);
  CHECK(v.wideComponent);
  CHECK(v.smallReach);
  CHECK(v.passable);

  // Truncating the chain keeps radii small but loses the width condition.
  CenterSet shortChain{region, 0.0, 0, {}};
  for (int k = 0; k < 6; ++k) {
    shortChain.coords.push_back(208.0 + 4.0 * k);
    shortChain.coords.push_back(240.0);
  }
  PassableVerdict w = isPassable({2, 2}, 120.0, shortChain);
  CHECK_FALSE(w.wideComponent);
  CHECK(w.smallReach);
  CHECK_FALSE(w.passable);

  // No centers at all: nothing is painted, nothing can be wide.
  CenterSet none{region, 0.0, 0, {}};
  PassableVerdict e = isPassable({2, 2}, 120.0, none);
  CHECK_FALSE(e.wideComponent);
  CHECK_FALSE(e.passable);
}

TEST_CASE("small blocks can never pass: one occupied cube busts the radius budget") {
  // At m = 7 the radius budget is 7/60, below the floor 1/sqrt(pi) every
  // occupied cube obeys, so any configuration that could satisfy the width
  // condition automatically violates the radius condition.
  Region region = Region::box({28.0, 28.0});
  PassableVerdict v = isPassable({2, 2}, 7.0, singleCenter(region, 14.2, 14.3));
  CHECK_FALSE(v.smallReach);
  CHECK_FALSE(v.passable);
}

TEST_CASE("passability rejects malformed queries") {
  Region torus = Region::torus({28.0, 28.0});
  CHECK_THROWS_AS(isPassable({2, 2}, 7.0, singleCenter(torus, 14.0, 14.0)),
                  std::invalid_argument);
  Region box = Region::box({28.0, 28.0});
  CHECK_THROWS_AS(isPassable({2, 2}, 0.0, singleCenter(box, 14.0, 14.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(isPassable({2}, 7.0, singleCenter(box, 14.0, 14.0)), std::invalid_argument);
  // Neighborhood would stick out of the window.
  CHECK_THROWS_AS(isPassable({3, 3}, 7.0, singleCenter(box, 14.0, 14.0)),
                  std::invalid_argument);
}

TEST_CASE("block probability estimates are deterministic and honestly zero") {
  PmEstimate empty = estimatePm(2, 7.0, 0.0, 20, 1);
  CHECK(empty.successes == 0);
  CHECK(empty.pHat == 0.0);

  PmEstimate degenerate = estimatePm(2, 7.0, 0.15, 40, 2);
  CHECK(degenerate.successes == 0);  // the budget argument above, empirically
  CHECK(degenerate.ciLo == 0.0);
  CHECK(degenerate.ciHi < 0.15);

  PmEstimate a = estimatePm(2, 7.0, 0.15, 30, 3, Adjacency::Face, 1);
  PmEstimate b = estimatePm(2, 7.0, 0.15, 30, 3, Adjacency::Face, 2);
  CHECK(a.successes == b.successes);
}

TEST_CASE("tail bound matches its formula and clamps where uninformative") {
  // lambda (2*9*3+3)^2 = 16.245 demand mass against pi*9 volume: evaluated
  // independently, the exponent gives 0.0262672131606...
  CHECK(chernoffTailBound(3.0, 0.005, 2) ==
        doctest::Approx(0.026267213160603462).epsilon(1e-12));
  CHECK(chernoffTailBound(1.0, 0.01, 2) == 1.0);  // mass exceeds volume: no information
  double b1 = chernoffTailBound(1.0, 0.005, 2);
  double b2 = chernoffTailBound(2.0, 0.005, 2);
  double b3 = chernoffTailBound(3.0, 0.005, 2);
  CHECK(b1 <= 1.0);
  CHECK(b2 < b1);
  CHECK(b3 < b2);
  CHECK_THROWS_AS(chernoffTailBound(0.0, 0.01, 2), std::invalid_argument);
  CHECK_THROWS_AS(chernoffTailBound(1.0, 0.0, 2), std::invalid_argument);
}

TEST_CASE("radius verdicts only depend on the inflated neighborhood") {
  Region region = Region::torus({40.0, 40.0});
  SplitMix64 g(55);
  for (int trial = 0; trial < 20; ++trial) {
    CenterSet cs = samplePoisson(region, 0.3, 500 + static_cast<unsigned>(trial));
    std::vector<long> iv{static_cast<long>(g.next() % 40), static_cast<long>(g.next() % 40)};
    double a = 0.8 + 1.8 * g.uniform01();
    CHECK(verifyLocality(iv, a, cs));
  }
  CHECK_THROWS_AS(verifyLocality({0, 0}, 0.0, samplePoisson(region, 0.1, 1)),
                  std::invalid_argument);
}

TEST_CASE("reach fields and painted masks survive their binary round-trips") {
  Region region = Region::torus({12.0, 12.0});
  CenterSet cs = samplePoisson(region, 0.7, 91);
  ReachField rf = reachField(countField(cs));
  std::ostringstream out;
  writeReachField(out, rf);
  std::istringstream in(out.str());
  ReachField back = readReachField(in);
  CHECK(back.lattice.dims == rf.lattice.dims);
  CHECK(back.r == rf.r);
  CHECK(back.maxReach == rf.maxReach);

  std::string bytes = out.str();
  std::istringstream cut(bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(readReachField(cut), std::runtime_error);

  GridMask mask = paintedSet(rf);
  std::ostringstream mout;
  writePaintedMask(mout, mask, region);
  std::istringstream min(mout.str());
  GridMask mback = readPaintedMask(min);
  CHECK(mback.dims == mask.dims);
  CHECK(mback.v == mask.v);
}
