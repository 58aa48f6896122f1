#include "stalloc/render.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "stalloc/rng.hpp"

namespace stalloc {

namespace {

void writePixmap(std::ostream& out, long nx, long ny, const std::vector<std::uint8_t>& rgb) {
  out << "P6\n" << nx << " " << ny << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()),
            static_cast<std::streamsize>(rgb.size()));
  if (!out) throw std::runtime_error("render: write failed");
}

// Stable per-center color, kept away from white (unclaimed), black (ties)
// and the center-dot red.
void ownerColor(std::int32_t owner, std::uint8_t* px) {
  std::uint64_t bits = mix64(static_cast<std::uint64_t>(owner) + 1);
  px[0] = static_cast<std::uint8_t>(40 + (bits & 0xFF) * 176 / 256);
  px[1] = static_cast<std::uint8_t>(40 + ((bits >> 8) & 0xFF) * 176 / 256);
  px[2] = static_cast<std::uint8_t>(40 + ((bits >> 16) & 0xFF) * 176 / 256);
}

}  // namespace

void renderAllocation(std::ostream& out, const Allocation& alloc, const CenterSet& centers) {
  const Grid& grid = alloc.grid;
  if (grid.region.dim != 2)
    throw std::invalid_argument("renderAllocation: images are 2D only");
  const long nx = grid.cells[0], ny = grid.cells[1];
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(nx) * ny * 3);

  for (long y = 0; y < ny; ++y) {
    const long row = ny - 1 - y;  // pixmap rows run top to bottom
    for (long x = 0; x < nx; ++x) {
      const long cell = x + y * nx;
      std::uint8_t* px = &rgb[static_cast<std::size_t>((row * nx + x) * 3)];
      std::int32_t owner = alloc.owner[static_cast<std::size_t>(cell)];
      if (owner == kUnclaimed) {
        px[0] = px[1] = px[2] = 255;
      } else if (alloc.disputed(cell)) {
        px[0] = px[1] = px[2] = 0;
      } else {
        ownerColor(owner, px);
      }
    }
  }

  // Center dots: the cell under each center plus its face neighbors.
  for (int c = 0; c < centers.count(); ++c) {
    long cv[2];
    grid.cellVector(grid.cellOfPoint(centers.center(c)), cv);
    const long offs[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& o : offs) {
      long x = cv[0] + o[0], y = cv[1] + o[1];
      if (grid.region.topology == Topology::Torus) {
        x = (x % nx + nx) % nx;
        y = (y % ny + ny) % ny;
      } else if (x < 0 || x >= nx || y < 0 || y >= ny) {
        continue;
      }
      std::uint8_t* px = &rgb[static_cast<std::size_t>(((ny - 1 - y) * nx + x) * 3)];
      px[0] = 180;
      px[1] = 0;
      px[2] = 0;
    }
  }

  writePixmap(out, nx, ny, rgb);
}

void renderMask(std::ostream& out, const GridMask& mask) {
  if (mask.dims.size() != 2) throw std::invalid_argument("renderMask: images are 2D only");
  const long nx = mask.dims[0], ny = mask.dims[1];
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(nx) * ny * 3);
  for (long y = 0; y < ny; ++y)
    for (long x = 0; x < nx; ++x) {
      std::uint8_t* px = &rgb[static_cast<std::size_t>(((ny - 1 - y) * nx + x) * 3)];
      std::uint8_t v = mask.get(x + y * nx) ? 60 : 255;
      px[0] = px[1] = px[2] = v;
    }
  writePixmap(out, nx, ny, rgb);
}

}  // namespace stalloc
