#include "stalloc/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "stalloc/grid.hpp"
#include "stalloc/parallel.hpp"
#include "stalloc/percolation.hpp"
#include "stalloc/rng.hpp"
#include "stalloc/stats.hpp"

namespace stalloc {

double unitBallVolume(int d) {
  if (d < 1) throw std::invalid_argument("unitBallVolume: dimension must be >= 1");
  // V_d = V_{d-2} * 2*pi/d, seeded with V_0 = 1 and V_1 = 2. The recursion
  // avoids tgamma and gives the same doubles on every libm.
  double even = 1.0, odd = 2.0;
  for (int k = 2; k <= d; ++k) {
    if (k % 2 == 0)
      even *= 2.0 * M_PI / k;
    else
      odd *= 2.0 * M_PI / k;
  }
  return (d % 2 == 0) ? even : odd;
}

int searchFactor(int d) {
  if (d < 2) throw std::invalid_argument("searchFactor: dimension must be >= 2");
  double t = 3.0 + 2.0 * std::sqrt(static_cast<double>(d)) *
                       std::pow(unitBallVolume(d), 1.0 / d);
  return static_cast<int>(std::ceil(t));
}

CubeLattice::CubeLattice(const Region& r) : region(r) {
  dims.resize(static_cast<std::size_t>(r.dim));
  cubeCount = 1;
  for (int l = 0; l < r.dim; ++l) {
    double L = r.sides[static_cast<std::size_t>(l)];
    if (r.topology == Topology::Torus) {
      long n = std::llround(L);
      if (n < 1 || std::abs(L - static_cast<double>(n)) > 1e-9 * std::max(1.0, L))
        throw std::invalid_argument(
            "CubeLattice: torus sides must be integers so unit cubes tile the wrap");
      dims[static_cast<std::size_t>(l)] = n;
    } else {
      dims[static_cast<std::size_t>(l)] = static_cast<long>(std::floor(L + 0.5)) + 1;
    }
    cubeCount *= dims[static_cast<std::size_t>(l)];
  }
}

long CubeLattice::flatten(const std::vector<long>& iv) const {
  long f = 0, mul = 1;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    f += iv[l] * mul;
    mul *= dims[l];
  }
  return f;
}

void CubeLattice::unflatten(long flat, std::vector<long>& iv) const {
  iv.resize(dims.size());
  for (std::size_t l = 0; l < dims.size(); ++l) {
    iv[l] = flat % dims[l];
    flat /= dims[l];
  }
}

std::vector<long> CubeLattice::cubeOfPoint(const double* x) const {
  std::vector<long> iv(dims.size());
  for (std::size_t l = 0; l < dims.size(); ++l) {
    long i = static_cast<long>(std::floor(x[l] + 0.5));
    if (region.topology == Topology::Torus) {
      i %= dims[l];
      if (i < 0) i += dims[l];
    } else {
      i = std::clamp(i, 0L, dims[l] - 1);
    }
    iv[l] = i;
  }
  return iv;
}

long CubeLattice::setDistanceSq(const std::vector<long>& iv,
                                const std::vector<long>& jv) const {
  long s = 0;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    long d = std::labs(iv[l] - jv[l]);
    if (region.topology == Topology::Torus) d = std::min(d, dims[l] - d);
    long g = d > 1 ? d - 1 : 0;
    s += g * g;
  }
  return s;
}

CubeField countField(const CenterSet& centers) {
  CubeField f{CubeLattice(centers.region), {}, {}};
  f.count.assign(static_cast<std::size_t>(f.lattice.cubeCount), 0);
  for (int c = 0; c < centers.count(); ++c) {
    std::vector<long> iv = f.lattice.cubeOfPoint(centers.center(c));
    ++f.count[static_cast<std::size_t>(f.lattice.flatten(iv))];
  }
  for (long i = 0; i < f.lattice.cubeCount; ++i)
    if (f.count[static_cast<std::size_t>(i)] > 0) f.occupied.push_back(i);
  return f;
}

namespace {

// Smallest r with cumulative count <= pi_d * r^d, given the distinct squared
// set distances of occupied cubes (ascending) and the center count within
// each. On [sqrt(s_k)/beta, sqrt(s_{k+1})/beta) the count is the constant
// cum[k], so the first interval whose volume-root candidate fits inside it
// decides. The last interval is unbounded and always yields.
double scanBreakpoints(const std::vector<long>& distSq, const std::vector<long>& cum,
                       int d, double beta, double pid) {
  for (std::size_t t = 0; t < distSq.size(); ++t) {
    double lo = std::sqrt(static_cast<double>(distSq[t])) / beta;
    double root = std::pow(static_cast<double>(cum[t]) / pid, 1.0 / d);
    double cand = std::max(lo, root);
    if (t + 1 == distSq.size()) return cand;
    if (cand < std::sqrt(static_cast<double>(distSq[t + 1])) / beta) return cand;
  }
  return 0.0;  // not reached: the final interval always returns
}

// Distinct squared distances from iv to the occupied cubes, with cumulative
// counts. occupiedIvs are the unflattened occupied indices, parallel to
// zeta.occupied. Uses a bucket-by-distance pass when the distance range is
// small relative to the occupied count, otherwise sorts; both produce the
// same vectors.
void gatherBreakpoints(const CubeField& zeta,
                       const std::vector<std::vector<long>>& occupiedIvs,
                       const std::vector<long>& iv, std::vector<long>& distSq,
                       std::vector<long>& cum) {
  distSq.clear();
  cum.clear();
  const std::size_t m = zeta.occupied.size();
  long maxSq = 0;
  for (std::size_t l = 0; l < zeta.lattice.dims.size(); ++l) {
    long span = zeta.lattice.dims[l];
    long far = zeta.lattice.region.topology == Topology::Torus ? span / 2 : span - 1;
    long g = far > 1 ? far - 1 : 0;
    maxSq += g * g;
  }
  long running = 0;
  if (maxSq + 1 <= 16 * static_cast<long>(m)) {
    std::vector<long> hist(static_cast<std::size_t>(maxSq) + 1, 0);
    for (std::size_t k = 0; k < m; ++k)
      hist[static_cast<std::size_t>(zeta.lattice.setDistanceSq(iv, occupiedIvs[k]))] +=
          zeta.count[static_cast<std::size_t>(zeta.occupied[k])];
    for (long s = 0; s <= maxSq; ++s)
      if (hist[static_cast<std::size_t>(s)] > 0) {
        running += hist[static_cast<std::size_t>(s)];
        distSq.push_back(s);
        cum.push_back(running);
      }
  } else {
    std::vector<std::pair<long, long>> byDist;
    byDist.reserve(m);
    for (std::size_t k = 0; k < m; ++k)
      byDist.emplace_back(zeta.lattice.setDistanceSq(iv, occupiedIvs[k]),
                          zeta.count[static_cast<std::size_t>(zeta.occupied[k])]);
    std::sort(byDist.begin(), byDist.end());
    for (const auto& [s, c] : byDist) {
      if (distSq.empty() || distSq.back() != s) {
        distSq.push_back(s);
        cum.push_back(running);
      }
      running += c;
      cum.back() = running;
    }
  }
}

std::vector<std::vector<long>> unflattenOccupied(const CubeField& zeta) {
  std::vector<std::vector<long>> ivs(zeta.occupied.size());
  for (std::size_t k = 0; k < zeta.occupied.size(); ++k)
    zeta.lattice.unflatten(zeta.occupied[k], ivs[k]);
  return ivs;
}

double reachAt(const CubeField& zeta, const std::vector<std::vector<long>>& occupiedIvs,
               const std::vector<long>& iv, double beta, double pid) {
  if (zeta.count[static_cast<std::size_t>(zeta.lattice.flatten(iv))] == 0) return 0.0;
  std::vector<long> distSq, cum;
  gatherBreakpoints(zeta, occupiedIvs, iv, distSq, cum);
  return scanBreakpoints(distSq, cum, zeta.lattice.region.dim, beta, pid);
}

}  // namespace

double reachRadius(const CubeField& zeta, const std::vector<long>& iv) {
  const int d = zeta.lattice.region.dim;
  return reachAt(zeta, unflattenOccupied(zeta), iv,
                 static_cast<double>(searchFactor(d)), unitBallVolume(d));
}

ReachField reachField(const CubeField& zeta) {
  const int d = zeta.lattice.region.dim;
  const double beta = static_cast<double>(searchFactor(d));
  const double pid = unitBallVolume(d);
  ReachField out{zeta.lattice, {}, 0.0};
  out.r.assign(static_cast<std::size_t>(zeta.lattice.cubeCount), 0.0);
  auto occupiedIvs = unflattenOccupied(zeta);
  std::vector<long> distSq, cum;
  for (std::size_t k = 0; k < zeta.occupied.size(); ++k) {
    gatherBreakpoints(zeta, occupiedIvs, occupiedIvs[k], distSq, cum);
    double r = scanBreakpoints(distSq, cum, d, beta, pid);
    out.r[static_cast<std::size_t>(zeta.occupied[k])] = r;
    out.maxReach = std::max(out.maxReach, r);
  }
  return out;
}

GridMask paintedSet(const ReachField& reach) {
  const CubeLattice& lat = reach.lattice;
  const int d = lat.region.dim;
  GridMask mask(lat.dims, lat.region.topology);
  std::vector<long> iv, off(static_cast<std::size_t>(d)), jv(static_cast<std::size_t>(d));
  for (long f = 0; f < lat.cubeCount; ++f) {
    double r = reach.r[static_cast<std::size_t>(f)];
    if (r <= 0.0) continue;
    lat.unflatten(f, iv);
    // Cubes within set distance r: offsets bounded per axis by ceil(r)+1
    // (set distance drops |offset|-1), clipped to the window / wrap range.
    long hw = static_cast<long>(std::ceil(r)) + 1;
    std::vector<long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l) {
      long n = lat.dims[static_cast<std::size_t>(l)];
      if (lat.region.topology == Topology::Torus) {
        long wrapHi = n / 2, wrapLo = wrapHi - n + 1;
        lo[static_cast<std::size_t>(l)] = std::max(-hw, wrapLo);
        hi[static_cast<std::size_t>(l)] = std::min(hw, wrapHi);
      } else {
        lo[static_cast<std::size_t>(l)] = std::max(-hw, -iv[static_cast<std::size_t>(l)]);
        hi[static_cast<std::size_t>(l)] =
            std::min(hw, n - 1 - iv[static_cast<std::size_t>(l)]);
      }
      off[static_cast<std::size_t>(l)] = lo[static_cast<std::size_t>(l)];
    }
    const double rr = r * r;
    for (;;) {
      long s = 0;
      for (int l = 0; l < d; ++l) {
        long a = std::labs(off[static_cast<std::size_t>(l)]);
        long g = a > 1 ? a - 1 : 0;
        s += g * g;
      }
      if (static_cast<double>(s) <= rr) {
        for (int l = 0; l < d; ++l) {
          long v = iv[static_cast<std::size_t>(l)] + off[static_cast<std::size_t>(l)];
          long n = lat.dims[static_cast<std::size_t>(l)];
          if (v < 0) v += n;
          if (v >= n) v -= n;
          jv[static_cast<std::size_t>(l)] = v;
        }
        mask.set(lat.flatten(jv), true);
      }
      int l = 0;
      while (l < d && off[static_cast<std::size_t>(l)] == hi[static_cast<std::size_t>(l)]) {
        off[static_cast<std::size_t>(l)] = lo[static_cast<std::size_t>(l)];
        ++l;
      }
      if (l >= d) break;
      ++off[static_cast<std::size_t>(l)];
    }
  }
  return mask;
}

CenterSet restrictCenters(const CenterSet& centers, const std::vector<double>& lo,
                          const std::vector<double>& hi) {
  const int d = centers.region.dim;
  if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
    throw std::invalid_argument("restrictCenters: bounds must have one entry per axis");
  CenterSet out;
  out.region = centers.region;
  out.intensity = centers.intensity;
  out.seed = centers.seed;
  for (int c = 0; c < centers.count(); ++c) {
    const double* x = centers.center(c);
    bool in = true;
    for (int l = 0; l < d; ++l)
      if (x[l] < lo[static_cast<std::size_t>(l)] || x[l] >= hi[static_cast<std::size_t>(l)]) {
        in = false;
        break;
      }
    if (in) out.coords.insert(out.coords.end(), x, x + d);
  }
  return out;
}

GridMask claimedCubes(const Allocation& alloc) {
  CubeLattice lat(alloc.grid.region);
  GridMask mask(lat.dims, lat.region.topology);
  const int d = alloc.grid.region.dim;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (long cell = 0; cell < alloc.grid.cellCount; ++cell) {
    if (alloc.owner[static_cast<std::size_t>(cell)] == kUnclaimed) continue;
    alloc.grid.cellPoint(cell, x.data());
    mask.set(lat.flatten(lat.cubeOfPoint(x.data())), true);
  }
  return mask;
}

std::vector<ContainmentViolation> verifyContainment(const Allocation& alloc,
                                                    const CenterSet& centers,
                                                    const ReachField& reach) {
  if (!alloc.grid.region.sameShape(centers.region) ||
      !alloc.grid.region.sameShape(reach.lattice.region))
    throw std::invalid_argument("verifyContainment: inputs from different windows");
  const CubeLattice& lat = reach.lattice;
  const int d = lat.region.dim;
  // Owner's cube and its squared reach, per center.
  std::vector<std::vector<long>> ownCube(static_cast<std::size_t>(centers.count()));
  std::vector<double> ownRR(static_cast<std::size_t>(centers.count()));
  for (int c = 0; c < centers.count(); ++c) {
    ownCube[static_cast<std::size_t>(c)] = lat.cubeOfPoint(centers.center(c));
    double r = reach.r[static_cast<std::size_t>(
        lat.flatten(ownCube[static_cast<std::size_t>(c)]))];
    ownRR[static_cast<std::size_t>(c)] = r * r;
  }
  std::vector<ContainmentViolation> bad;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (long cell = 0; cell < alloc.grid.cellCount; ++cell) {
    std::int32_t c = alloc.owner[static_cast<std::size_t>(cell)];
    if (c == kUnclaimed) continue;
    alloc.grid.cellPoint(cell, x.data());
    long s = lat.setDistanceSq(ownCube[static_cast<std::size_t>(c)],
                               lat.cubeOfPoint(x.data()));
    if (static_cast<double>(s) > ownRR[static_cast<std::size_t>(c)])
      bad.push_back(ContainmentViolation{cell, static_cast<int>(c)});
  }
  return bad;
}

PassableVerdict isPassable(const std::vector<long>& j, double m,
                           const CenterSet& centers, Adjacency adjacency) {
  const int d = centers.region.dim;
  if (static_cast<int>(j.size()) != d)
    throw std::invalid_argument("isPassable: index size must match the dimension");
  if (!(m > 0.0)) throw std::invalid_argument("isPassable: block size must be positive");
  if (centers.region.topology != Topology::Box)
    throw std::invalid_argument(
        "isPassable: sub-window restriction needs a box window (no wrap)");

  // Neighborhood of the block: the 3^d level-m cubes around index j, i.e.
  // [m*j_l - 3m/2, m*j_l + 3m/2) per axis. Must sit inside the window.
  std::vector<double> nbLo(static_cast<std::size_t>(d)), nbHi(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    double c = m * static_cast<double>(j[static_cast<std::size_t>(l)]);
    nbLo[static_cast<std::size_t>(l)] = c - 1.5 * m;
    nbHi[static_cast<std::size_t>(l)] = c + 1.5 * m;
    if (nbLo[static_cast<std::size_t>(l)] < 0.0 ||
        nbHi[static_cast<std::size_t>(l)] > centers.region.sides[static_cast<std::size_t>(l)])
      throw std::invalid_argument("isPassable: block neighborhood exceeds the window");
  }

  PassableVerdict v;
  v.index = j;
  v.m = m;

  // Condition (ii): every unit cube with an integer point in the neighborhood
  // has reach radius below m/(6*(beta_d+1)), computed from the full
  // configuration. Empty cubes have radius 0 and pass automatically, so only
  // occupied cubes need a scan; the first offender settles the flag.
  const double threshold = m / (6.0 * (searchFactor(d) + 1));
  CubeField full = countField(centers);
  auto fullIvs = unflattenOccupied(full);
  const double beta = static_cast<double>(searchFactor(d));
  const double pid = unitBallVolume(d);
  v.smallReach = true;
  for (std::size_t k = 0; k < full.occupied.size() && v.smallReach; ++k) {
    bool inside = true;
    for (int l = 0; l < d; ++l) {
      double il = static_cast<double>(fullIvs[k][static_cast<std::size_t>(l)]);
      if (il < nbLo[static_cast<std::size_t>(l)] || il >= nbHi[static_cast<std::size_t>(l)]) {
        inside = false;
        break;
      }
    }
    if (inside && !(reachAt(full, fullIvs, fullIvs[k], beta, pid) < threshold))
      v.smallReach = false;
  }

  // Condition (i): rebuild the painted set from the centers inside the
  // neighborhood only, then look for a component that is wide (l-infinity
  // bounding-box extent at least m/2, in real units: a component spanning
  // cube indices lo..hi covers hi-lo+1 unit lengths) and overlaps the block.
  CenterSet local = restrictCenters(centers, nbLo, nbHi);
  GridMask painted = paintedSet(reachField(countField(local)));
  ClusterLabeling labels = labelClusters(painted, adjacency);
  std::vector<uint8_t> touches(static_cast<std::size_t>(labels.componentCount), 0);
  std::vector<long> iv;
  CubeLattice lat(centers.region);
  for (long f = 0; f < lat.cubeCount; ++f) {
    std::int32_t lb = labels.label[static_cast<std::size_t>(f)];
    if (lb == 0) continue;
    lat.unflatten(f, iv);
    bool overlap = true;
    for (int l = 0; l < d; ++l) {
      double c = m * static_cast<double>(j[static_cast<std::size_t>(l)]);
      double cubeLo = static_cast<double>(iv[static_cast<std::size_t>(l)]) - 0.5;
      double cubeHi = static_cast<double>(iv[static_cast<std::size_t>(l)]) + 0.5;
      if (!(cubeHi > c - 0.5 * m && cubeLo < c + 0.5 * m)) {
        overlap = false;
        break;
      }
    }
    if (overlap) touches[static_cast<std::size_t>(lb - 1)] = 1;
  }
  v.wideComponent = false;
  for (std::int32_t c = 1; c <= labels.componentCount && !v.wideComponent; ++c) {
    if (!touches[static_cast<std::size_t>(c - 1)]) continue;
    long extent = 0;
    for (int l = 0; l < d; ++l) {
      auto k = static_cast<std::size_t>(c - 1) * d + static_cast<std::size_t>(l);
      extent = std::max(extent, labels.bboxHi[k] - labels.bboxLo[k] + 1);
    }
    if (static_cast<double>(extent) >= 0.5 * m) v.wideComponent = true;
  }

  v.passable = v.wideComponent && v.smallReach;
  return v;
}

PmEstimate estimatePm(int d, double m, double lambda, long replicas,
                      std::uint64_t seed, Adjacency adjacency, int threads) {
  if (replicas < 1) throw std::invalid_argument("estimatePm: need at least one replica");
  if (!(m > 0.0)) throw std::invalid_argument("estimatePm: block size must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("estimatePm: intensity must be >= 0");
  // Window of side 4m with the probed block at index 2: its neighborhood
  // spans [m/2, 7m/2), leaving margin m/2 on every side.
  Region window = Region::box(std::vector<double>(static_cast<std::size_t>(d), 4.0 * m));
  std::vector<long> j(static_cast<std::size_t>(d), 2);
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(replicas), 0);
  runReplicas(replicas, threads, [&](long r) {
    CenterSet centers =
        samplePoisson(window, lambda, replicaSeed(seed, static_cast<std::uint64_t>(r)));
    if (isPassable(j, m, centers, adjacency).passable)
      hit[static_cast<std::size_t>(r)] = 1;
  });
  PmEstimate est;
  est.m = m;
  est.lambda = lambda;
  est.replicas = replicas;
  for (long r = 0; r < replicas; ++r) est.successes += hit[static_cast<std::size_t>(r)];
  est.pHat = static_cast<double>(est.successes) / static_cast<double>(replicas);
  Interval ci = wilson(est.successes, replicas);
  est.ciLo = ci.lo;
  est.ciHi = ci.hi;
  return est;
}

double chernoffTailBound(double a, double lambda, int d) {
  if (!(a > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("chernoffTailBound: need a > 0 and lambda > 0");
  const double beta = static_cast<double>(searchFactor(d));
  double box = 2.0 * beta * a + 3.0;  // side of the box enclosing the search ball
  double vol = 1.0, ad = 1.0;
  for (int l = 0; l < d; ++l) {
    vol *= box;
    ad *= a;
  }
  double mean = lambda * vol;
  double x = mean / (unitBallVolume(d) * ad);
  if (x >= 1.0) return 1.0;  // tail level below the mean: nothing to say
  double g = (x - 1.0 - std::log(x)) / x;
  return std::exp(-mean * g);
}

bool verifyLocality(const std::vector<long>& iv, double a, const CenterSet& centers) {
  if (!(a > 0.0)) throw std::invalid_argument("verifyLocality: radius must be positive");
  CubeField full = countField(centers);
  bool before = reachRadius(full, iv) <= a;

  // Keep exactly the centers whose cube lies within set distance beta_d*a.
  const CubeLattice& lat = full.lattice;
  const double cutSq =
      (static_cast<double>(searchFactor(lat.region.dim)) * a) *
      (static_cast<double>(searchFactor(lat.region.dim)) * a);
  CenterSet kept;
  kept.region = centers.region;
  kept.intensity = centers.intensity;
  kept.seed = centers.seed;
  const int d = lat.region.dim;
  for (int c = 0; c < centers.count(); ++c) {
    const double* x = centers.center(c);
    long s = lat.setDistanceSq(iv, lat.cubeOfPoint(x));
    if (static_cast<double>(s) <= cutSq) kept.coords.insert(kept.coords.end(), x, x + d);
  }
  bool after = reachRadius(countField(kept), iv) <= a;
  return before == after;
}

namespace {

void writeRaw(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

std::string readHeaderLine(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(std::string(what) + ": truncated header");
  return line;
}

// "key v1 v2 ..." -> values; throws if the key does not match.
std::vector<double> headerValues(const std::string& line, const std::string& key,
                                 const char* what) {
  std::istringstream ss(line);
  std::string k;
  ss >> k;
  if (k != key)
    throw std::runtime_error(std::string(what) + ": expected '" + key + "', got '" + k + "'");
  std::vector<double> vals;
  double v;
  while (ss >> v) vals.push_back(v);
  return vals;
}

Region headerRegion(std::istream& in, const char* what) {
  auto dimv = headerValues(readHeaderLine(in, what), "dim", what);
  std::string topoLine = readHeaderLine(in, what);
  std::istringstream ts(topoLine);
  std::string k, topo;
  ts >> k >> topo;
  if (k != "topology") throw std::runtime_error(std::string(what) + ": expected 'topology'");
  auto sides = headerValues(readHeaderLine(in, what), "sides", what);
  if (dimv.size() != 1 || static_cast<int>(sides.size()) != static_cast<int>(dimv[0]))
    throw std::runtime_error(std::string(what) + ": dim/sides mismatch");
  if (topo == "torus") return Region::torus(sides);
  if (topo == "box") return Region::box(sides);
  throw std::runtime_error(std::string(what) + ": unknown topology '" + topo + "'");
}

void writeRegionHeader(std::ostream& out, const Region& region) {
  out << "dim " << region.dim << "\n";
  out << "topology " << (region.topology == Topology::Torus ? "torus" : "box") << "\n";
  out << "sides";
  char buf[40];
  for (double s : region.sides) {
    std::snprintf(buf, sizeof buf, " %.17g", s);
    out << buf;
  }
  out << "\n";
}

}  // namespace

void writeReachField(std::ostream& out, const ReachField& reach) {
  out << "stalloc-reach 1\n";
  writeRegionHeader(out, reach.lattice.region);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", reach.maxReach);
  out << "maxreach " << buf << "\n";
  out << "end-header\n";
  writeRaw(out, reach.r.data(), reach.r.size() * sizeof(double));
}

ReachField readReachField(std::istream& in) {
  if (readHeaderLine(in, "reach field") != "stalloc-reach 1")
    throw std::runtime_error("reach field: unrecognized format line");
  Region region = headerRegion(in, "reach field");
  auto mx = headerValues(readHeaderLine(in, "reach field"), "maxreach", "reach field");
  if (readHeaderLine(in, "reach field") != "end-header")
    throw std::runtime_error("reach field: missing end-header");
  ReachField out{CubeLattice(region), {}, mx.at(0)};
  out.r.resize(static_cast<std::size_t>(out.lattice.cubeCount));
  in.read(reinterpret_cast<char*>(out.r.data()),
          static_cast<std::streamsize>(out.r.size() * sizeof(double)));
  if (!in) throw std::runtime_error("reach field: truncated data");
  return out;
}

void writePaintedMask(std::ostream& out, const GridMask& mask, const Region& region) {
  out << "stalloc-painted 1\n";
  writeRegionHeader(out, region);
  out << "end-header\n";
  writeRaw(out, mask.v.data(), mask.v.size());
}

GridMask readPaintedMask(std::istream& in) {
  if (readHeaderLine(in, "painted mask") != "stalloc-painted 1")
    throw std::runtime_error("painted mask: unrecognized format line");
  Region region = headerRegion(in, "painted mask");
  if (readHeaderLine(in, "painted mask") != "end-header")
    throw std::runtime_error("painted mask: missing end-header");
  CubeLattice lat(region);
  GridMask mask(lat.dims, region.topology);
  in.read(reinterpret_cast<char*>(mask.v.data()),
          static_cast<std::streamsize>(mask.v.size()));
  if (!in) throw std::runtime_error("painted mask: truncated data");
  return mask;
}

}  // namespace stalloc
