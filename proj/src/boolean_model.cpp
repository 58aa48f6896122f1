#include "stalloc/boolean_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stalloc/majorant.hpp"

namespace stalloc {

namespace {

// Visit every cell whose center point is within `radius` of `x`, calling
// fn(flatIndex). Enumerates an index box around the center's cell, clipped to
// the window (or to one wrap period on a torus), and keeps the cells passing
// the exact squared-distance test.
template <typename Fn>
void forEachCellInBall(const Grid& grid, const double* x, double radius, Fn&& fn) {
  const Region& region = grid.region;
  const int d = region.dim;
  const double rr = radius * radius;
  long hw = static_cast<long>(std::ceil(radius / grid.h)) + 1;

  long home[8], lo[8], hi[8], off[8];
  grid.cellVector(grid.cellOfPoint(x), home);
  for (int l = 0; l < d; ++l) {
    long n = grid.cells[static_cast<std::size_t>(l)];
    if (region.topology == Topology::Torus) {
      long wrapHi = n / 2, wrapLo = wrapHi - n + 1;
      lo[l] = std::max(-hw, wrapLo);
      hi[l] = std::min(hw, wrapHi);
    } else {
      lo[l] = std::max(-hw, -home[l]);
      hi[l] = std::min(hw, n - 1 - home[l]);
    }
    off[l] = lo[l];
  }

  for (;;) {
    double s = 0.0;
    long iv[8];
    for (int l = 0; l < d; ++l) {
      long n = grid.cells[static_cast<std::size_t>(l)];
      long v = home[l] + off[l];
      if (v < 0) v += n;
      if (v >= n) v -= n;
      iv[l] = v;
      double dl = region.axisDelta(grid.cellCenter(l, v), x[l], l);
      s += dl * dl;
    }
    if (s <= rr) fn(grid.flatIndex(iv));
    int l = 0;
    while (l < d && off[l] == hi[l]) {
      off[l] = lo[l];
      ++l;
    }
    if (l >= d) break;
    ++off[l];
  }
}

}  // namespace

GridMask booleanMask(const CenterSet& centers, double radius, const Grid& grid) {
  if (!(radius > 0.0)) throw std::invalid_argument("booleanMask: radius must be positive");
  if (!grid.region.sameShape(centers.region))
    throw std::invalid_argument("booleanMask: centers and grid disagree on the window");
  GridMask mask(grid.cells, grid.region.topology);
  for (int c = 0; c < centers.count(); ++c)
    forEachCellInBall(grid, centers.center(c), radius,
                      [&](long cell) { mask.set(cell, true); });
  return mask;
}

BooleanParams equivalentBooleanParams(double alpha, int d) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("equivalentBooleanParams: appetite must be positive");
  double pow2d = 1.0;
  for (int l = 0; l < d; ++l) pow2d *= 2.0;
  return BooleanParams{alpha * pow2d / unitBallVolume(d), 0.5, d};
}

double dominationRadius(double alpha, int d, double h) {
  return std::pow(alpha / unitBallVolume(d), 1.0 / d) -
         h * std::sqrt(static_cast<double>(d));
}

std::vector<long> dominationCheck(const Allocation& alloc, const CenterSet& centers) {
  const Grid& grid = alloc.grid;
  if (!grid.region.sameShape(centers.region))
    throw std::invalid_argument("dominationCheck: allocation and centers disagree on the window");
  double radius = dominationRadius(alloc.appetite, grid.region.dim, grid.h);
  std::vector<long> bad;
  if (radius <= 0.0) return bad;  // margin swallows the ball: nothing checkable
  for (int c = 0; c < centers.count(); ++c)
    forEachCellInBall(grid, centers.center(c), radius, [&](long cell) {
      if (alloc.owner[static_cast<std::size_t>(cell)] == kUnclaimed) bad.push_back(cell);
    });
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  return bad;
}

}  // namespace stalloc
