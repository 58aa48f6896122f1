#include "stalloc/allocation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace stalloc {

namespace {

constexpr int kMaxDim = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Spatial bucket index. Cells are grouped into axis-aligned buckets of
// B = ceil(1/h) cells per axis (so a bucket spans at least one model unit).
// The last bucket on an axis may be ragged. Buckets let a cursor reason about
// whole blocks of far-away cells without touching them, and `freeCount` lets
// it discard fully-captured blocks in O(1).
// ---------------------------------------------------------------------------
struct BucketIndex {
  int dim = 0;
  long cellsPerBucket = 1;  // B
  double side = 0.0;        // nominal bucket extent, B * h
  std::array<long, kMaxDim> nb{};      // buckets per axis
  std::array<long, kMaxDim> cells{};   // grid cells per axis
  long bucketCount = 0;
  std::vector<std::int32_t> freeCount;

  void init(const Grid& g) {
    dim = g.region.dim;
    cellsPerBucket = static_cast<long>(std::ceil(1.0 / g.h));
    if (cellsPerBucket < 1) cellsPerBucket = 1;
    side = static_cast<double>(cellsPerBucket) * g.h;
    bucketCount = 1;
    for (int l = 0; l < dim; ++l) {
      cells[static_cast<std::size_t>(l)] = g.cells[static_cast<std::size_t>(l)];
      long n = (cells[static_cast<std::size_t>(l)] + cellsPerBucket - 1) / cellsPerBucket;
      nb[static_cast<std::size_t>(l)] = n;
      bucketCount *= n;
    }
    freeCount.assign(static_cast<std::size_t>(bucketCount), 0);
    // Count the cells each bucket actually covers (ragged edges included).
    std::array<long, kMaxDim> bv{};
    for (long b = 0; b < bucketCount; ++b) {
      long f = b;
      long count = 1;
      for (int l = 0; l < dim; ++l) {
        bv[static_cast<std::size_t>(l)] = f % nb[static_cast<std::size_t>(l)];
        f /= nb[static_cast<std::size_t>(l)];
        long a = bv[static_cast<std::size_t>(l)] * cellsPerBucket;
        long e = std::min(a + cellsPerBucket, cells[static_cast<std::size_t>(l)]);
        count *= (e - a);
      }
      freeCount[static_cast<std::size_t>(b)] = static_cast<std::int32_t>(count);
    }
  }

  long bucketOfCell(long cellFlat) const {
    long b = 0;
    long mul = 1;
    for (int l = 0; l < dim; ++l) {
      long n = cells[static_cast<std::size_t>(l)];
      long iv = cellFlat % n;
      cellFlat /= n;
      b += (iv / cellsPerBucket) * mul;
      mul *= nb[static_cast<std::size_t>(l)];
    }
    return b;
  }
};

struct Cand {
  double key;
  long id;
};
struct CandGreater {
  bool operator()(const Cand& a, const Cand& b) const {
    if (a.key != b.key) return a.key > b.key;
    return a.id > b.id;
  }
};

struct Event {
  double key;
  std::int32_t center;
  long cell;
};
struct EventGreater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.key != b.key) return a.key > b.key;
    if (a.center != b.center) return a.center > b.center;
    return a.cell > b.cell;
  }
};

struct EngineCtx {
  const Region* region = nullptr;
  const Grid* grid = nullptr;
  const CenterSet* centers = nullptr;
  BucketIndex buckets;
  const std::int32_t* owner = nullptr;

  // Squared distance from center c to the cell's center point, accumulated in
  // fixed axis order. verifyStability recomputes distances through
  // Region::distanceSq with the same per-axis expressions, so engine keys and
  // oracle keys agree bit for bit (the build disables FP contraction).
  double keyOf(int c, long cellFlat) const {
    const double* x = centers->center(c);
    const double h = grid->h;
    double s = 0.0;
    for (int l = 0; l < region->dim; ++l) {
      long n = grid->cells[static_cast<std::size_t>(l)];
      long iv = cellFlat % n;
      cellFlat /= n;
      double d = region->axisDelta(x[l], (static_cast<double>(iv) + 0.5) * h, l);
      s += d * d;
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// Per-center candidate stream. Yields this center's (distance^2, cell) pairs
// in nondecreasing key order, lazily: buckets are discovered ring by ring
// around the center's home bucket, opened only once their lower bound is
// needed, and their free cells become heap candidates.
//
// Pruning safety. A cell is dropped at open time only if it is already owned.
// When a bucket is processed, its bound exceeds every key this cursor has
// yielded so far (buckets are processed in bound order, and bounds are true
// minima over the bucket's actual cell keys), while every capture so far
// happened at a key <= the global frontier <= that last yield. Hence a
// dropped cell is strictly farther from this center than from its owner --
// it can never form an unstable pair. Exact ties (equal keys) are the one
// exception, so an owned cell whose key equals its owner's key is kept; it
// later surfaces as an event and marks the cell as contested. For the same
// reason a fully-owned bucket may be skipped outright only when its bound is
// strictly above the last yield.
// ---------------------------------------------------------------------------
struct Cursor {
  const double* x = nullptr;
  std::array<long, kMaxDim> home{};
  std::array<long, kMaxDim> offLo{}, offHi{};  // admissible bucket offsets per axis
  long ring = 0;
  long maxRing = 0;
  double lastYield = -1.0;
  std::priority_queue<Cand, std::vector<Cand>, CandGreater> bucketH, cellH;

  void init(const EngineCtx& E, const double* center) {
    x = center;
    const BucketIndex& bi = E.buckets;
    maxRing = 0;
    for (int l = 0; l < bi.dim; ++l) {
      long iv = static_cast<long>(std::floor(x[l] / E.grid->h));
      iv = std::clamp(iv, 0L, bi.cells[static_cast<std::size_t>(l)] - 1);
      home[static_cast<std::size_t>(l)] = iv / bi.cellsPerBucket;
      long n = bi.nb[static_cast<std::size_t>(l)];
      if (E.region->topology == Topology::Torus) {
        // Offset window covering each bucket exactly once under wrap.
        long hi = n / 2;
        offHi[static_cast<std::size_t>(l)] = hi;
        offLo[static_cast<std::size_t>(l)] = hi - n + 1;
      } else {
        offLo[static_cast<std::size_t>(l)] = -home[static_cast<std::size_t>(l)];
        offHi[static_cast<std::size_t>(l)] = n - 1 - home[static_cast<std::size_t>(l)];
      }
      maxRing = std::max(maxRing, std::max(offHi[static_cast<std::size_t>(l)],
                                           -offLo[static_cast<std::size_t>(l)]));
    }
  }

  // Lower bound (squared) on every cell key in any ring >= k that has not
  // been pushed yet. A ring-k bucket is separated from the center by k-1
  // intermediate buckets of which at most one is ragged, so its nearest cell
  // center sits at least (k-2)*side + 3h/2 away in the true geometry; the
  // computed (k-2)*side keeps a margin of over a cell against the rounding of
  // this very expression, so it never overtakes a bucket's exact bound.
  double ringBoundSq(long k, double side) const {
    if (k <= 2) return 0.0;
    double s = static_cast<double>(k - 2) * side;
    return s * s;
  }

  double bucketBoundSq(const EngineCtx& E, const std::array<long, kMaxDim>& bv) const {
    const BucketIndex& bi = E.buckets;
    const double h = E.grid->h;
    double s = 0.0;
    for (int l = 0; l < bi.dim; ++l) {
      long a = bv[static_cast<std::size_t>(l)] * bi.cellsPerBucket;
      long b = std::min(a + bi.cellsPerBucket, bi.cells[static_cast<std::size_t>(l)]) - 1;
      long near = std::clamp(static_cast<long>(std::floor(x[l] / h)), a, b);
      // Nearest cell of the index arc lies at the unwrapped-nearest index or,
      // under wrap, at one of the arc's ends. All three are actual cells, so
      // the bound is itself an achieved per-axis delta -- never optimistic.
      double best = std::abs(E.region->axisDelta(x[l], (static_cast<double>(near) + 0.5) * h, l));
      best = std::min(best, std::abs(E.region->axisDelta(x[l], (static_cast<double>(a) + 0.5) * h, l)));
      best = std::min(best, std::abs(E.region->axisDelta(x[l], (static_cast<double>(b) + 0.5) * h, l)));
      s += best * best;
    }
    return s;
  }

  void pushBucket(const EngineCtx& E, const std::array<long, kMaxDim>& bv) {
    const BucketIndex& bi = E.buckets;
    long flat = 0;
    long mul = 1;
    for (int l = 0; l < bi.dim; ++l) {
      flat += bv[static_cast<std::size_t>(l)] * mul;
      mul *= bi.nb[static_cast<std::size_t>(l)];
    }
    bucketH.push(Cand{bucketBoundSq(E, bv), flat});
  }

  void pushRing(const EngineCtx& E, long k) {
    const BucketIndex& bi = E.buckets;
    const int d = bi.dim;
    const bool wrap = E.region->topology == Topology::Torus;
    std::array<long, kMaxDim> o{}, bv{};
    auto emit = [&]() {
      for (int l = 0; l < d; ++l) {
        long v = home[static_cast<std::size_t>(l)] + o[static_cast<std::size_t>(l)];
        if (wrap) {
          long n = bi.nb[static_cast<std::size_t>(l)];
          v %= n;
          if (v < 0) v += n;
        }
        bv[static_cast<std::size_t>(l)] = v;
      }
      pushBucket(E, bv);
    };
    if (k == 0) {
      for (int l = 0; l < d; ++l) o[static_cast<std::size_t>(l)] = 0;
      emit();
      return;
    }
    // Walk the ring surface: axes 1..d-1 run over their clamped boxes; axis 0
    // runs fully only when some outer axis already sits at +-k.
    std::array<long, kMaxDim> lo{}, hi{};
    for (int l = 0; l < d; ++l) {
      lo[static_cast<std::size_t>(l)] = std::max(offLo[static_cast<std::size_t>(l)], -k);
      hi[static_cast<std::size_t>(l)] = std::min(offHi[static_cast<std::size_t>(l)], k);
    }
    for (int l = 1; l < d; ++l) o[static_cast<std::size_t>(l)] = lo[static_cast<std::size_t>(l)];
    for (;;) {
      long outerMax = 0;
      for (int l = 1; l < d; ++l)
        outerMax = std::max(outerMax, std::abs(o[static_cast<std::size_t>(l)]));
      if (outerMax == k) {
        for (long v = lo[0]; v <= hi[0]; ++v) {
          o[0] = v;
          emit();
        }
      } else {
        if (-k >= lo[0]) {
          o[0] = -k;
          emit();
        }
        if (k <= hi[0]) {
          o[0] = k;
          emit();
        }
      }
      int l = 1;
      while (l < d && o[static_cast<std::size_t>(l)] == hi[static_cast<std::size_t>(l)]) {
        o[static_cast<std::size_t>(l)] = lo[static_cast<std::size_t>(l)];
        ++l;
      }
      if (l >= d) break;
      ++o[static_cast<std::size_t>(l)];
    }
  }

  void openBucket(const EngineCtx& E, const Cand& b) {
    const BucketIndex& bi = E.buckets;
    if (bi.freeCount[static_cast<std::size_t>(b.id)] == 0 && b.key > lastYield) return;
    const int d = bi.dim;
    const double h = E.grid->h;
    std::array<long, kMaxDim> a{}, e{};
    std::array<long, kMaxDim> stride{};
    {
      long f = b.id;
      long mul = 1;
      for (int l = 0; l < d; ++l) {
        long bv = f % bi.nb[static_cast<std::size_t>(l)];
        f /= bi.nb[static_cast<std::size_t>(l)];
        a[static_cast<std::size_t>(l)] = bv * bi.cellsPerBucket;
        e[static_cast<std::size_t>(l)] =
            std::min(a[static_cast<std::size_t>(l)] + bi.cellsPerBucket,
                     bi.cells[static_cast<std::size_t>(l)]);
        stride[static_cast<std::size_t>(l)] = mul;
        mul *= bi.cells[static_cast<std::size_t>(l)];
      }
    }
    // Per-axis squared deltas, shared by every cell of the bucket.
    std::array<std::vector<double>, kMaxDim> d2;
    for (int l = 0; l < d; ++l) {
      long n = e[static_cast<std::size_t>(l)] - a[static_cast<std::size_t>(l)];
      d2[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(n));
      for (long i = 0; i < n; ++i) {
        double c = (static_cast<double>(a[static_cast<std::size_t>(l)] + i) + 0.5) * h;
        double dl = E.region->axisDelta(x[l], c, l);
        d2[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] = dl * dl;
      }
    }
    std::array<long, kMaxDim> iv{};
    for (;;) {
      double key = 0.0;
      long cell = 0;
      for (int l = 0; l < d; ++l) {
        key += d2[static_cast<std::size_t>(l)][static_cast<std::size_t>(iv[static_cast<std::size_t>(l)])];
        cell += (a[static_cast<std::size_t>(l)] + iv[static_cast<std::size_t>(l)]) *
                stride[static_cast<std::size_t>(l)];
      }
      std::int32_t own = E.owner[static_cast<std::size_t>(cell)];
      if (own == kUnclaimed) {
        cellH.push(Cand{key, cell});
      } else if (E.keyOf(own, cell) == key) {
        cellH.push(Cand{key, cell});  // exact tie: keep it to mark the contest
      }
      int l = 0;
      while (l < d && iv[static_cast<std::size_t>(l)] ==
                          e[static_cast<std::size_t>(l)] - a[static_cast<std::size_t>(l)] - 1) {
        iv[static_cast<std::size_t>(l)] = 0;
        ++l;
      }
      if (l >= d) break;
      ++iv[static_cast<std::size_t>(l)];
    }
  }

  bool next(const EngineCtx& E, double& keyOut, long& cellOut) {
    const double side = E.buckets.side;
    for (;;) {
      double ct = cellH.empty() ? kInf : cellH.top().key;
      double bt = bucketH.empty() ? kInf : bucketH.top().key;
      double rb = ring > maxRing ? kInf : ringBoundSq(ring, side);
      if (!cellH.empty() && ct <= bt && ct <= rb) {
        keyOut = ct;
        cellOut = cellH.top().id;
        cellH.pop();
        lastYield = ct;
        return true;
      }
      if (!bucketH.empty() && bt <= rb) {
        Cand b = bucketH.top();
        bucketH.pop();
        openBucket(E, b);
        continue;
      }
      if (ring <= maxRing) {
        pushRing(E, ring);
        ++ring;
        continue;
      }
      return false;
    }
  }
};

}  // namespace

long quotaForAppetite(double appetite, const Grid& grid) {
  if (!(appetite >= 0.0) || !std::isfinite(appetite))
    throw std::invalid_argument("allocation: appetite must be finite and >= 0");
  double hd = 1.0;
  for (int l = 0; l < grid.region.dim; ++l) hd *= grid.h;
  double q = appetite / hd;
  if (q > 9.0e15) throw std::invalid_argument("allocation: appetite too large for this grid");
  return std::llround(q);
}

long Allocation::claimedCellCount() const {
  long n = 0;
  for (std::int32_t o : owner) n += (o != kUnclaimed);
  return n;
}

long Allocation::disputedCellCount() const {
  long n = 0;
  for (std::uint64_t w : tieBits) n += __builtin_popcountll(w);
  return n;
}

double Allocation::satedFraction() const {
  if (sated.empty()) return 1.0;
  long n = 0;
  for (std::uint8_t s : sated) n += s;
  return static_cast<double>(n) / static_cast<double>(sated.size());
}

Allocation computeAllocation(const CenterSet& centers, const Grid& grid, double appetite) {
  if (!grid.region.sameShape(centers.region))
    throw std::invalid_argument("computeAllocation: grid and centers live on different regions");
  if (grid.region.dim > kMaxDim)
    throw std::invalid_argument("computeAllocation: dimensions above 8 are not supported");
  const int n = centers.count();
  for (int c = 0; c < n; ++c)
    if (!centers.region.contains(centers.center(c)))
      throw std::invalid_argument("computeAllocation: center outside its region");

  Allocation alloc;
  alloc.grid = grid;
  alloc.appetite = appetite;
  alloc.quota = quotaForAppetite(appetite, grid);
  alloc.owner.assign(static_cast<std::size_t>(grid.cellCount), kUnclaimed);
  alloc.tieBits.assign(static_cast<std::size_t>((grid.cellCount + 63) / 64), 0);
  alloc.claimed.assign(static_cast<std::size_t>(n), 0);
  alloc.sated.assign(static_cast<std::size_t>(n), alloc.quota == 0 ? 1 : 0);
  if (alloc.quota == 0 || n == 0) return alloc;

  EngineCtx E;
  E.region = &grid.region;
  E.grid = &grid;
  E.centers = &centers;
  E.buckets.init(grid);
  E.owner = alloc.owner.data();

  std::vector<Cursor> cursors(static_cast<std::size_t>(n));
  std::priority_queue<Event, std::vector<Event>, EventGreater> pq;
  for (int c = 0; c < n; ++c) {
    cursors[static_cast<std::size_t>(c)].init(E, centers.center(c));
    double key;
    long cell;
    if (cursors[static_cast<std::size_t>(c)].next(E, key, cell))
      pq.push(Event{key, c, cell});
  }

  while (!pq.empty()) {
    Event ev = pq.top();
    pq.pop();
    auto ci = static_cast<std::size_t>(ev.center);
    if (alloc.sated[ci]) continue;
    if (alloc.owner[static_cast<std::size_t>(ev.cell)] == kUnclaimed) {
      alloc.owner[static_cast<std::size_t>(ev.cell)] = ev.center;
      --E.buckets.freeCount[static_cast<std::size_t>(E.buckets.bucketOfCell(ev.cell))];
      if (++alloc.claimed[ci] == alloc.quota) {
        alloc.sated[ci] = 1;
        continue;  // this center is done; drop its stream
      }
    } else if (E.keyOf(alloc.owner[static_cast<std::size_t>(ev.cell)], ev.cell) == ev.key) {
      // A second center reached the cell at exactly the capture distance.
      alloc.markDisputed(ev.cell);
    }
    double key;
    long cell;
    if (cursors[ci].next(E, key, cell)) pq.push(Event{key, ev.center, cell});
  }
  return alloc;
}

std::vector<UnstablePair> verifyStability(const Allocation& alloc, const CenterSet& centers) {
  if (!alloc.grid.region.sameShape(centers.region))
    throw std::invalid_argument("verifyStability: allocation and centers disagree on the region");
  const int n = centers.count();
  if (static_cast<int>(alloc.claimed.size()) != n)
    throw std::invalid_argument("verifyStability: allocation was built from a different center set");

  const Grid& g = alloc.grid;
  std::vector<double> pt(static_cast<std::size_t>(g.region.dim));

  // Farthest captured cell per center; an unsated center covets everything.
  std::vector<double> covetKey(static_cast<std::size_t>(n), -kInf);
  for (long cell = 0; cell < g.cellCount; ++cell) {
    std::int32_t o = alloc.owner[static_cast<std::size_t>(cell)];
    if (o == kUnclaimed) continue;
    g.cellPoint(cell, pt.data());
    double k = g.region.distanceSq(centers.center(o), pt.data());
    covetKey[static_cast<std::size_t>(o)] = std::max(covetKey[static_cast<std::size_t>(o)], k);
  }
  for (int c = 0; c < n; ++c)
    if (!alloc.sated[static_cast<std::size_t>(c)]) covetKey[static_cast<std::size_t>(c)] = kInf;

  std::vector<UnstablePair> bad;
  for (long cell = 0; cell < g.cellCount; ++cell) {
    if (alloc.disputed(cell)) continue;  // ambiguous captures are exempt
    g.cellPoint(cell, pt.data());
    std::int32_t o = alloc.owner[static_cast<std::size_t>(cell)];
    double ownKey = o == kUnclaimed ? kInf : g.region.distanceSq(centers.center(o), pt.data());
    for (int c = 0; c < n; ++c) {
      double k = g.region.distanceSq(centers.center(c), pt.data());
      if (k < ownKey && k < covetKey[static_cast<std::size_t>(c)])
        bad.push_back(UnstablePair{cell, c});
    }
  }
  return bad;
}

GridMask claimedMask(const Allocation& alloc) {
  GridMask m(alloc.grid.cells, alloc.grid.region.topology);
  for (long cell = 0; cell < alloc.grid.cellCount; ++cell)
    if (alloc.owner[static_cast<std::size_t>(cell)] != kUnclaimed) m.set(cell, true);
  return m;
}

}  // namespace stalloc
