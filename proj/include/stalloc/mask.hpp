#pragma once

#include <cstdint>
#include <vector>

#include "stalloc/region.hpp"

namespace stalloc {

// Lattice connectivity used when reading a mask as a graph: Face joins cells
// that share a (d-1)-face (2d neighbors), FaceCorner joins the full 3^d - 1
// neighborhood.
enum class Adjacency { Face, FaceCorner };

// Dense boolean field over a rectangular index lattice -- used both for
// claimed-cell masks (grid resolution) and painted-cube masks (unit cubes).
// Byte-per-entry: simple, fast, and the sizes we handle stay in the MBs.
struct GridMask {
  std::vector<long> dims;
  Topology topology = Topology::Torus;
  std::vector<std::uint8_t> v;

  GridMask() = default;
  GridMask(std::vector<long> d, Topology t)
      : dims(std::move(d)), topology(t) {
    long n = 1;
    for (long m : dims) n *= m;
    v.assign(static_cast<std::size_t>(n), 0);
  }

  long size() const { return static_cast<long>(v.size()); }
  bool get(long i) const { return v[static_cast<std::size_t>(i)] != 0; }
  void set(long i, bool b) { v[static_cast<std::size_t>(i)] = b ? 1 : 0; }

  long countTrue() const {
    long n = 0;
    for (std::uint8_t b : v) n += b;
    return n;
  }

  // True iff every set entry of this mask is set in `other` (same shape).
  bool subsetOf(const GridMask& other) const {
    if (dims != other.dims || v.size() != other.v.size()) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] && !other.v[i]) return false;
    return true;
  }
};

}  // namespace stalloc
