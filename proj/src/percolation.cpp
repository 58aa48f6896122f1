#include "stalloc/percolation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "stalloc/allocation.hpp"
#include "stalloc/grid.hpp"
#include "stalloc/parallel.hpp"
#include "stalloc/pointprocess.hpp"
#include "stalloc/rng.hpp"
#include "stalloc/stats.hpp"

namespace stalloc {

namespace {

struct UnionFind {
  std::vector<long> parent;
  explicit UnionFind(long n) : parent(static_cast<std::size_t>(n)) {
    for (long i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  long find(long i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  }
  void unite(long a, long b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      parent[static_cast<std::size_t>(b)] = a;
    else
      parent[static_cast<std::size_t>(a)] = b;
  }
};

// Half of the neighbor offsets (each undirected edge visited once): the
// offset's last nonzero component is negative.
std::vector<std::vector<long>> halfNeighborhood(int d, Adjacency adj) {
  std::vector<std::vector<long>> out;
  if (adj == Adjacency::Face) {
    for (int l = 0; l < d; ++l) {
      std::vector<long> o(static_cast<std::size_t>(d), 0);
      o[static_cast<std::size_t>(l)] = -1;
      out.push_back(o);
    }
    return out;
  }
  std::vector<long> o(static_cast<std::size_t>(d), -1);
  for (;;) {
    int last = -1;
    for (int l = 0; l < d; ++l)
      if (o[static_cast<std::size_t>(l)] != 0) last = l;
    if (last >= 0 && o[static_cast<std::size_t>(last)] < 0) out.push_back(o);
    int l = 0;
    while (l < d && o[static_cast<std::size_t>(l)] == 1) {
      o[static_cast<std::size_t>(l)] = -1;
      ++l;
    }
    if (l >= d) break;
    ++o[static_cast<std::size_t>(l)];
  }
  return out;
}

}  // namespace

ClusterLabeling labelClusters(const GridMask& mask, Adjacency adj) {
  const int d = static_cast<int>(mask.dims.size());
  const long n = mask.size();
  ClusterLabeling out;
  out.dims = mask.dims;
  out.topology = mask.topology;
  out.label.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) return out;

  UnionFind uf(n);
  const auto offsets = halfNeighborhood(d, adj);
  std::vector<long> iv(static_cast<std::size_t>(d), 0);
  for (long cell = 0; cell < n; ++cell) {
    if (mask.get(cell)) {
      for (const auto& o : offsets) {
        long nb = 0;
        long mul = 1;
        bool valid = true;
        for (int l = 0; l < d; ++l) {
          long m = mask.dims[static_cast<std::size_t>(l)];
          long v = iv[static_cast<std::size_t>(l)] + o[static_cast<std::size_t>(l)];
          if (mask.topology == Topology::Torus) {
            if (v < 0) v += m;
            if (v >= m) v -= m;
          } else if (v < 0 || v >= m) {
            valid = false;
            break;
          }
          nb += v * mul;
          mul *= m;
        }
        if (valid && nb != cell && mask.get(nb)) uf.unite(cell, nb);
      }
    }
    int l = 0;
    while (l < d && iv[static_cast<std::size_t>(l)] == mask.dims[static_cast<std::size_t>(l)] - 1) {
      iv[static_cast<std::size_t>(l)] = 0;
      ++l;
    }
    if (l < d) ++iv[static_cast<std::size_t>(l)];
  }

  // Labels in order of each component's smallest member.
  std::vector<std::int32_t> rootLabel(static_cast<std::size_t>(n), 0);
  for (long cell = 0; cell < n; ++cell) {
    if (!mask.get(cell)) continue;
    long r = uf.find(cell);
    if (rootLabel[static_cast<std::size_t>(r)] == 0) rootLabel[static_cast<std::size_t>(r)] = ++out.componentCount;
    out.label[static_cast<std::size_t>(cell)] = rootLabel[static_cast<std::size_t>(r)];
  }

  out.size.assign(static_cast<std::size_t>(out.componentCount), 0);
  out.bboxLo.assign(static_cast<std::size_t>(out.componentCount) * d, std::numeric_limits<long>::max());
  out.bboxHi.assign(static_cast<std::size_t>(out.componentCount) * d, std::numeric_limits<long>::min());
  std::fill(iv.begin(), iv.end(), 0);
  for (long cell = 0; cell < n; ++cell) {
    std::int32_t lb = out.label[static_cast<std::size_t>(cell)];
    if (lb > 0) {
      ++out.size[static_cast<std::size_t>(lb - 1)];
      for (int l = 0; l < d; ++l) {
        auto k = static_cast<std::size_t>(lb - 1) * d + static_cast<std::size_t>(l);
        out.bboxLo[k] = std::min(out.bboxLo[k], iv[static_cast<std::size_t>(l)]);
        out.bboxHi[k] = std::max(out.bboxHi[k], iv[static_cast<std::size_t>(l)]);
      }
    }
    int l = 0;
    while (l < d && iv[static_cast<std::size_t>(l)] == mask.dims[static_cast<std::size_t>(l)] - 1) {
      iv[static_cast<std::size_t>(l)] = 0;
      ++l;
    }
    if (l < d) ++iv[static_cast<std::size_t>(l)];
  }
  return out;
}

CrossingReport crossing(const ClusterLabeling& labeling, int axis) {
  if (labeling.topology != Topology::Box)
    throw std::invalid_argument("crossing: only box masks have opposite faces");
  const int d = static_cast<int>(labeling.dims.size());
  if (axis < 0 || axis >= d) throw std::invalid_argument("crossing: axis out of range");
  CrossingReport rep;
  for (std::int32_t c = 1; c <= labeling.componentCount; ++c) {
    auto k = static_cast<std::size_t>(c - 1) * d + static_cast<std::size_t>(axis);
    if (labeling.bboxLo[k] == 0 &&
        labeling.bboxHi[k] == labeling.dims[static_cast<std::size_t>(axis)] - 1) {
      rep.crosses = true;
      rep.componentId = c;
      break;
    }
  }
  return rep;
}

CrossingReport vacantCrossing(const GridMask& mask, int axis, Adjacency adj) {
  GridMask inv(mask.dims, mask.topology);
  for (long i = 0; i < mask.size(); ++i) inv.set(i, !mask.get(i));
  return crossing(labelClusters(inv, adj), axis);
}

SweepResult sweepAlpha(const Region& region, double h, double lambda,
                       const std::vector<double>& alphas, long replicas,
                       std::uint64_t seed, Adjacency adj, int threads) {
  if (region.topology != Topology::Box)
    throw std::invalid_argument("sweepAlpha: crossing analysis needs a box window");
  if (alphas.empty() || replicas < 1)
    throw std::invalid_argument("sweepAlpha: need at least one appetite and one replica");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i - 1]))
      throw std::invalid_argument("sweepAlpha: appetites must be strictly increasing");

  Grid grid(region, h);
  const std::size_t na = alphas.size();
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(replicas) * na, 0);

  runReplicas(replicas, threads, [&](long r) {
    CenterSet centers = samplePoisson(region, lambda, replicaSeed(seed, static_cast<std::uint64_t>(r)));
    for (std::size_t a = 0; a < na; ++a) {
      Allocation alloc = computeAllocation(centers, grid, alphas[a]);
      GridMask mask = claimedMask(alloc);
      if (crossing(labelClusters(mask, adj), 0).crosses)
        hit[static_cast<std::size_t>(r) * na + a] = 1;
    }
  });

  SweepResult res;
  res.dim = region.dim;
  res.sides = region.sides;
  res.h = h;
  res.lambda = lambda;
  res.adjacency = adj;
  res.seed = seed;
  res.replicas = replicas;
  std::vector<double> xs;
  std::vector<long> succ, trials;
  for (std::size_t a = 0; a < na; ++a) {
    long c = 0;
    for (long r = 0; r < replicas; ++r) c += hit[static_cast<std::size_t>(r) * na + a];
    Interval ci = wilson(c, replicas);
    res.points.push_back(SweepPoint{alphas[a], static_cast<double>(c) / replicas, ci.lo, ci.hi,
                                    replicas, c});
    xs.push_back(alphas[a]);
    succ.push_back(c);
    trials.push_back(replicas);
  }

  LogisticFit fit = fitLogistic(xs, succ, trials);
  if (fit.converged) {
    res.method = "logistic-mle";
    res.alphaHat = fit.mid;
    res.alphaHatLo = fit.midLo;
    res.alphaHatHi = fit.midHi;
    return res;
  }
  // Fallback: bracket the half-way point between adjacent sweep points.
  for (std::size_t a = 1; a < na; ++a) {
    double p0 = res.points[a - 1].pHat, p1 = res.points[a].pHat;
    if (p0 < 0.5 && p1 >= 0.5) {
      res.method = "interval-bisection";
      res.alphaHat = alphas[a - 1] + (0.5 - p0) * (alphas[a] - alphas[a - 1]) / (p1 - p0);
      res.alphaHatLo = alphas[a - 1];
      res.alphaHatHi = alphas[a];
      return res;
    }
  }
  res.method = "undetermined";
  res.alphaHat = res.alphaHatLo = res.alphaHatHi = std::numeric_limits<double>::quiet_NaN();
  return res;
}

bool monotoneCrossingCheck(const Region& region, double h, double lambda,
                           double alphaLow, double alphaHigh, std::uint64_t seed,
                           Adjacency adj) {
  if (!(alphaLow <= alphaHigh))
    throw std::invalid_argument("monotoneCrossingCheck: appetites out of order");
  Grid grid(region, h);
  CenterSet centers = samplePoisson(region, lambda, seed);
  bool lowCrosses =
      crossing(labelClusters(claimedMask(computeAllocation(centers, grid, alphaLow)), adj), 0)
          .crosses;
  bool highCrosses =
      crossing(labelClusters(claimedMask(computeAllocation(centers, grid, alphaHigh)), adj), 0)
          .crosses;
  return !lowCrosses || highCrosses;
}

void writeSweepCsv(std::ostream& out, const SweepResult& r) {
  out << "alpha,p_hat,ci_lo,ci_hi,replicas,crossings\n";
  char buf[160];
  for (const SweepPoint& p : r.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.9g,%.9g,%.9g,%ld,%ld\n", p.alpha, p.pHat, p.ciLo,
                  p.ciHi, p.replicas, p.crossings);
    out << buf;
  }
}

void writeThresholdBlock(std::ostream& out, const SweepResult& r) {
  char buf[200];
  out << "{\n";
  std::snprintf(buf, sizeof buf, "  alpha_hat = %.9g\n", r.alphaHat);
  out << buf;
  std::snprintf(buf, sizeof buf, "  alpha_hat_ci_lo = %.9g\n", r.alphaHatLo);
  out << buf;
  std::snprintf(buf, sizeof buf, "  alpha_hat_ci_hi = %.9g\n", r.alphaHatHi);
  out << buf;
  out << "  method = " << r.method << "\n";
  out << "  window =";
  for (double s : r.sides) {
    std::snprintf(buf, sizeof buf, " %.17g", s);
    out << buf;
  }
  out << " (box)\n";
  std::snprintf(buf, sizeof buf, "  h = %.17g\n  lambda = %.17g\n  replicas_per_alpha = %ld\n",
                r.h, r.lambda, r.replicas);
  out << buf;
  out << "  adjacency = " << (r.adjacency == Adjacency::Face ? "face" : "face-corner") << "\n";
  out << "  note = crossing probability carries finite-size drift; the"
         " half-way point moves with the window and is reported with its"
         " interval, not as a sharp constant\n";
  out << "}\n";
}

}  // namespace stalloc
