// Shipping gate. Runs the ten end-to-end checks the toolkit promises and
// prints one PASS/FAIL line per criterion with the measured numbers; the
// process exit code is the number of failures. Everything is seeded, so a
// green run is reproducible bit for bit.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/boolean_model.hpp"
#include "stalloc/grid.hpp"
#include "stalloc/majorant.hpp"
#include "stalloc/percolation.hpp"
#include "stalloc/pointprocess.hpp"
#include "stalloc/region.hpp"
#include "stalloc/rng.hpp"
#include "stalloc/stats.hpp"

using namespace stalloc;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// 1. Stability: no (cell, center) pair may prefer each other over the
//    computed assignment, across at least 100 instances on grids up to
//    128x128 with up to 50 centers, inside a two-minute budget.
Outcome stabilityGate() {
  auto t0 = std::chrono::steady_clock::now();
  Region region = Region::torus({8.0, 8.0});
  Grid grid(region, 0.0625);  // 128 x 128
  const double alphas[3] = {0.3, 0.7, 1.0};
  long pairs = 0;
  int instances = 0;
  for (int i = 0; i < 102; ++i) {
    std::uint64_t s = replicaSeed(9001, static_cast<std::uint64_t>(i));
    int count = 5 + static_cast<int>(s % 46);  // 5..50 centers
    CenterSet cs = sampleUniform(region, count, s);
    Allocation alloc = computeAllocation(cs, grid, alphas[i % 3]);
    pairs += static_cast<long>(verifyStability(alloc, cs).size());
    ++instances;
  }
  double el = seconds(t0);
  bool ok = pairs == 0 && el < 120.0;
  return {ok, fmt("%ld unstable pairs over %d instances (128x128 grid, <=50 centers, "
                  "appetites 0.3/0.7/1.0) in %.1fs (budget 120s)",
                  pairs, instances, el)};
}

// 2. Monotonicity: with the configuration held fixed, claimed territory is
//    nested in appetite; with appetite fixed, it is nested under adding
//    centers. 100 coupled pairs.
Outcome nestednessGate() {
  Region region = Region::torus({8.0, 8.0});
  Grid grid(region, 0.1);
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    std::uint64_t s = replicaSeed(9002, static_cast<std::uint64_t>(i));
    SplitMix64 g(s);
    CenterSet cs = samplePoisson(region, 0.6, g.next());
    double lo = 0.3 + 0.5 * g.uniform01();
    double hi = lo + 0.2 + 0.8 * g.uniform01();
    if (!claimedMask(computeAllocation(cs, grid, lo))
             .subsetOf(claimedMask(computeAllocation(cs, grid, hi))))
      ++bad;
  }
  for (int i = 0; i < 50; ++i) {
    std::uint64_t s = replicaSeed(9003, static_cast<std::uint64_t>(i));
    SplitMix64 g(s);
    CenterSet sub = samplePoisson(region, 0.5, g.next());
    CenterSet super = sub;
    CenterSet extra = samplePoisson(region, 0.3, g.next());
    super.coords.insert(super.coords.end(), extra.coords.begin(), extra.coords.end());
    if (!claimedMask(computeAllocation(sub, grid, 0.8))
             .subsetOf(claimedMask(computeAllocation(super, grid, 0.8))))
      ++bad;
  }
  return {bad == 0, fmt("%d nestedness violations over 50 appetite pairs + 50 "
                        "center-augmentation pairs",
                        bad)};
}

// 3. Containment: at unit appetite the claimed set, coarsened to unit cubes,
//    stays inside the painted majorant. 100 realizations on a 50x50 torus.
//
// Known hazard at intensity 1: the torus holds 2500 unit cubes, and with unit
// appetite a draw of more than 2500 centers puts total demand above the
// window's volume. The hungriest centers then claim leftovers nearly a full
// wrap away, while the reach radius saturates at (count/pi)^(1/2), whose ball
// misses the torus's far corners. The containment argument needs a ball
// around the center whose volume exceeds all nearby demand, which no ball in
// the window can supply once demand exceeds the window itself; the property
// genuinely fails there, so this gate reports such draws rather than dodging
// them with a friendlier seed.
Outcome containmentGate() {
  auto t0 = std::chrono::steady_clock::now();
  Region region = Region::torus({50.0, 50.0});
  Grid grid(region, 0.1);
  long violations = 0;
  int done = 0, badRealizations = 0, overloaded = 0;
  double worstStretch = 0.0;
  const double lambdas[3] = {0.2, 0.5, 1.0};
  for (int i = 0; i < 100; ++i) {
    double lambda = lambdas[i % 3];
    CenterSet cs = samplePoisson(region, lambda, replicaSeed(9004, static_cast<std::uint64_t>(i)));
    Allocation alloc = computeAllocation(cs, grid, 1.0);
    ReachField rf = reachField(countField(cs));
    auto bad = verifyContainment(alloc, cs, rf);
    if (!bad.empty()) {
      ++badRealizations;
      if (cs.count() > 2500) ++overloaded;
      std::vector<double> x(2);
      for (const auto& v : bad) {
        alloc.grid.cellPoint(v.cell, x.data());
        auto own = rf.lattice.cubeOfPoint(cs.center(v.center));
        long s = rf.lattice.setDistanceSq(own, rf.lattice.cubeOfPoint(x.data()));
        double r = rf.r[static_cast<std::size_t>(rf.lattice.flatten(own))];
        worstStretch = std::max(worstStretch, std::sqrt(static_cast<double>(s)) - r);
      }
    }
    violations += static_cast<long>(bad.size());
    ++done;
  }
  if (violations == 0)
    return {true, fmt("0 containment violations over %d realizations (50x50 torus, h=0.1, "
                      "intensities 0.2/0.5/1.0) in %.1fs",
                      done, seconds(t0))};
  return {false,
          fmt("%ld containment violations in %d of %d realizations (50x50 torus, h=0.1, "
              "intensities 0.2/0.5/1.0) in %.1fs; %d offending draw(s) had more centers "
              "than the 2500 unit cubes the torus holds, stranding claims up to %.2f "
              "beyond the saturated reach ball -- containment cannot hold when demand "
              "exceeds the window's volume",
              violations, badRealizations, done, seconds(t0), overloaded, worstStretch)};
}

// 4. Domination: every cell within the shaved ball radius of a center is
//    claimed. 100+ realizations across intensities and appetites.
Outcome dominationGate() {
  Region region = Region::torus({30.0, 30.0});
  Grid grid(region, 0.1);
  long violations = 0;
  int done = 0;
  const double lambdas[2] = {0.5, 1.0};
  const double alphas[3] = {0.5, 0.8, 1.0};
  for (int i = 0; i < 102; ++i) {
    double lambda = lambdas[i % 2];
    double alpha = alphas[(i / 2) % 3];
    CenterSet cs = samplePoisson(region, lambda, replicaSeed(9005, static_cast<std::uint64_t>(i)));
    Allocation alloc = computeAllocation(cs, grid, alpha);
    violations += static_cast<long>(dominationCheck(alloc, cs).size());
    ++done;
  }
  return {violations == 0,
          fmt("%ld domination violations over %d realizations (30x30 torus, h=0.1)",
              violations, done)};
}

// 5. Lattice homothety: doubling window, step, and centers while scaling the
//    appetite by 4 reproduces owners and contest flags exactly.
Outcome homothetyGate() {
  Region region = Region::torus({10.0, 10.0});
  Grid grid(region, 0.1);
  int bad = 0;
  for (int i = 0; i < 20; ++i) {
    SplitMix64 g(replicaSeed(9006, static_cast<std::uint64_t>(i)));
    CenterSet cs = samplePoisson(region, 0.8, g.next());
    double alpha = 0.4 + 0.8 * g.uniform01();
    CenterSet big = rescaleCenters(cs, 2.0);
    Grid bigGrid(big.region, 0.2);
    Allocation base = computeAllocation(cs, grid, alpha);
    Allocation scaled = computeAllocation(big, bigGrid, 4.0 * alpha);
    if (base.owner != scaled.owner || base.tieBits != scaled.tieBits ||
        base.quota != scaled.quota)
      ++bad;
  }
  return {bad == 0, fmt("%d of 20 coupled instances differed under the exact x2 rescaling", bad)};
}

// 6. Percolation sweep: on a 20x20 box at h=0.05, intensity 1, the crossing
//    probability is low at appetite 0.6, high at 0.8, and the fitted
//    threshold lands in [0.60, 0.80].
Outcome sweepGate() {
  auto t0 = std::chrono::steady_clock::now();
  Region region = Region::box({20.0, 20.0});
  std::vector<double> alphas{0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85};
  SweepResult res = sweepAlpha(region, 0.05, 1.0, alphas, 200, 9007, Adjacency::Face, 1);
  double p06 = res.points[1].pHat, p08 = res.points[5].pHat;
  bool ok = p06 < 0.35 && p08 > 0.65 && res.alphaHat >= 0.60 && res.alphaHat <= 0.80;
  return {ok, fmt("P(0.60)=%.3f, P(0.80)=%.3f, alpha_hat=%.3f in [%.3f,%.3f] (%s); "
                  "finite-size tolerance: threshold quoted with its interval on a 20x20 "
                  "window, 200 replicas/point; %.1fs",
                  p06, p08, res.alphaHat, res.alphaHatLo, res.alphaHatHi,
                  res.method.c_str(), seconds(t0))};
}

// 7. Tail bound: the empirical frequency of a large reach radius never beats
//    the analytic bound by more than 3 standard errors. 10^4 replicas.
Outcome tailGate() {
  auto t0 = std::chrono::steady_clock::now();
  const double lambda = 0.01;
  const std::vector<double> avalues{1.0, 2.0, 3.0};
  const long n = 10000;
  double maxA = 3.0;
  long side = 2 * static_cast<long>(std::ceil(searchFactor(2) * maxA)) + 4;
  Region window = Region::box({static_cast<double>(side), static_cast<double>(side)});
  std::vector<long> probe{side / 2, side / 2};
  std::vector<double> reach(static_cast<std::size_t>(n));
  for (long r = 0; r < n; ++r) {
    CenterSet cs = samplePoisson(window, lambda, replicaSeed(9008, static_cast<std::uint64_t>(r)));
    reach[static_cast<std::size_t>(r)] = reachRadius(countField(cs), probe);
  }
  bool ok = true;
  std::string detail;
  for (double a : avalues) {
    long exceed = 0;
    for (double r : reach)
      if (r > a) ++exceed;
    double p = static_cast<double>(exceed) / static_cast<double>(n);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    double bound = chernoffTailBound(a, lambda, 2);
    if (p > bound + 3.0 * se) ok = false;
    detail += fmt("a=%.0f: emp=%.4f vs bound=%.4f; ", a, p, bound);
  }
  detail += fmt("10^4 replicas at intensity 0.01, %.1fs", seconds(t0));
  return {ok, detail};
}

// 8. Locality: deleting everything outside the inflated ball never changes a
//    radius verdict. 10^3 random triples.
Outcome localityGate() {
  Region region = Region::torus({40.0, 40.0});
  long failures = 0;
  for (int i = 0; i < 1000; ++i) {
    SplitMix64 g(replicaSeed(9009, static_cast<std::uint64_t>(i)));
    CenterSet cs = samplePoisson(region, 0.3, g.next());
    std::vector<long> iv{static_cast<long>(g.next() % 40), static_cast<long>(g.next() % 40)};
    double a = 0.5 + 2.0 * g.uniform01();
    if (!verifyLocality(iv, a, cs)) ++failures;
  }
  return {failures == 0, fmt("%ld locality failures over 1000 (configuration, cube, radius) "
                             "triples",
                             failures)};
}

// 9. Block independence: passability verdicts of level-7 cubes five blocks
//    apart are uncorrelated to within 3 standard errors over 10^4 replicas.
Outcome independenceGate() {
  auto t0 = std::chrono::steady_clock::now();
  Region region = Region::box({63.0, 63.0});
  const long n = 10000;
  std::vector<std::uint8_t> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
  for (long r = 0; r < n; ++r) {
    CenterSet cs = samplePoisson(region, 0.15, replicaSeed(9010, static_cast<std::uint64_t>(r)));
    xs[static_cast<std::size_t>(r)] = isPassable({2, 2}, 7.0, cs).passable ? 1 : 0;
    ys[static_cast<std::size_t>(r)] = isPassable({7, 2}, 7.0, cs).passable ? 1 : 0;
  }
  CovarianceEstimate e = covarianceWithSE(xs, ys);
  long sx = 0, sy = 0;
  for (long r = 0; r < n; ++r) {
    sx += xs[static_cast<std::size_t>(r)];
    sy += ys[static_cast<std::size_t>(r)];
  }
  bool ok = std::fabs(e.cov) <= 3.0 * e.se;
  return {ok, fmt("|cov|=%.2e vs 3*se=%.2e at block separation 5 (10^4 replicas; marginal "
                  "rates %.4f and %.4f) in %.1fs",
                  std::fabs(e.cov), 3.0 * e.se, static_cast<double>(sx) / n,
                  static_cast<double>(sy) / n, seconds(t0))};
}

// 10. Exact satiation: whenever total quota fits in the window, every center
//     fills its quota and the sated fraction is exactly 1.
Outcome satiationGate() {
  int bad = 0;
  const double sides[3] = {4.0, 5.0, 6.0};
  const double steps[3] = {0.5, 0.25, 0.2};
  for (int i = 0; i < 20; ++i) {
    SplitMix64 g(replicaSeed(9011, static_cast<std::uint64_t>(i)));
    Region region = Region::torus({sides[i % 3], sides[i % 3]});
    Grid grid(region, steps[i % 3]);
    CenterSet cs = samplePoisson(region, 1.0, g.next());
    long n = cs.count();
    long q = n > 0 ? grid.cellCount / n : 1;
    if (q < 1) q = 1;  // keep demand meaningful even in crowded draws
    if (n * q > grid.cellCount) {
      --i;  // crowded beyond capacity: not this criterion's regime
      continue;
    }
    double alpha = static_cast<double>(q) * grid.cellVolume();
    Allocation alloc = computeAllocation(cs, grid, alpha);
    if (alloc.quota != q || alloc.satedFraction() != 1.0) ++bad;
  }
  return {bad == 0, fmt("%d of 20 tori with demand <= capacity missed exact satiation", bad)};
}

}  // namespace

int main() {
  struct Gate {
    const char* name;
    Outcome (*run)();
  };
  const Gate gates[] = {
      {"stability of every computed allocation", stabilityGate},
      {"claimed territory nested in appetite and centers", nestednessGate},
      {"claimed cubes contained in the painted majorant", containmentGate},
      {"guaranteed-capture radius honored", dominationGate},
      {"exactness under the x2 lattice homothety", homothetyGate},
      {"crossing threshold located near 0.7", sweepGate},
      {"reach-radius tail within the analytic bound", tailGate},
      {"radius verdicts local to the inflated ball", localityGate},
      {"distant block verdicts uncorrelated", independenceGate},
      {"exact satiation when demand fits capacity", satiationGate},
  };
  int failures = 0;
  int idx = 0;
  for (const Gate& gate : gates) {
    ++idx;
    Outcome out = gate.run();
    std::printf("%s  criterion %2d: %s -- %s\n", out.ok ? "PASS" : "FAIL", idx, gate.name,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
