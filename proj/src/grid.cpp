#include "stalloc/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stalloc {

Grid::Grid(const Region& r, double h_) : region(r), h(h_) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid: mesh h must be positive");
  cells.resize(static_cast<std::size_t>(region.dim));
  cellCount = 1;
  for (int l = 0; l < region.dim; ++l) {
    double L = region.sides[static_cast<std::size_t>(l)];
    long n = std::llround(L / h);
    if (n < 1 || std::fabs(L - static_cast<double>(n) * h) > 1e-9 * L)
      throw std::invalid_argument("grid: side " + std::to_string(L) +
                                  " is not an integer multiple of h=" + std::to_string(h));
    cells[static_cast<std::size_t>(l)] = n;
    cellCount *= n;
  }
}

void Grid::cellVector(long flat, long* iv) const {
  for (int l = 0; l < region.dim; ++l) {
    long n = cells[static_cast<std::size_t>(l)];
    iv[l] = flat % n;
    flat /= n;
  }
}

long Grid::flatIndex(const long* iv) const {
  long flat = 0;
  for (int l = region.dim - 1; l >= 0; --l) {
    long n = cells[static_cast<std::size_t>(l)];
    long v = iv[l];
    if (v < 0 || v >= n) throw std::out_of_range("grid: cell index out of range");
    flat = flat * n + v;
  }
  return flat;
}

void Grid::cellPoint(long flat, double* out) const {
  for (int l = 0; l < region.dim; ++l) {
    long n = cells[static_cast<std::size_t>(l)];
    out[l] = (static_cast<double>(flat % n) + 0.5) * h;
    flat /= n;
  }
}

long Grid::cellOfPoint(const double* x) const {
  long flat = 0;
  for (int l = region.dim - 1; l >= 0; --l) {
    long n = cells[static_cast<std::size_t>(l)];
    long v = static_cast<long>(std::floor(x[l] / h));
    if (v < 0) v = 0;
    if (v >= n) v = n - 1;
    flat = flat * n + v;
  }
  return flat;
}

double Grid::cellVolume() const {
  double v = 1.0;
  for (int l = 0; l < region.dim; ++l) v *= h;
  return v;
}

}  // namespace stalloc
