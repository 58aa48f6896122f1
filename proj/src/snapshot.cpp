#include "stalloc/snapshot.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stalloc/version.hpp"

// Arrays are written in host byte order; the toolkit targets little-endian
// hosts and the format line would let a future reader add swapping if that
// ever changes.

namespace stalloc {

namespace {

void put(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void take(std::istream& in, void* p, std::size_t n, const char* what) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw std::runtime_error(std::string("snapshot: truncated ") + what);
}

std::string line(std::istream& in) {
  std::string s;
  if (!std::getline(in, s)) throw std::runtime_error("snapshot: truncated header");
  return s;
}

// Header lines are "key value...". Returns the remainder after the key and
// validates the key so field order is locked down.
std::string field(std::istream& in, const std::string& key) {
  std::string l = line(in);
  if (l.rfind(key + " ", 0) != 0)
    throw std::runtime_error("snapshot: expected header field '" + key + "', got '" + l + "'");
  return l.substr(key.size() + 1);
}

}  // namespace

void writeSnapshot(std::ostream& out, const Allocation& alloc, const CenterSet& centers) {
  const Region& region = alloc.grid.region;
  if (!region.sameShape(centers.region))
    throw std::invalid_argument("writeSnapshot: allocation and centers disagree on the window");

  char buf[64];
  out << "stalloc-snapshot 1\n";
  out << "engine " << kEngineVersion << "\n";
  out << "rng " << kRngId << "\n";
  out << "dim " << region.dim << "\n";
  out << "topology " << (region.topology == Topology::Torus ? "torus" : "box") << "\n";
  out << "sides";
  for (double s : region.sides) {
    std::snprintf(buf, sizeof buf, " %.17g", s);
    out << buf;
  }
  out << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", alloc.grid.h);
  out << "h " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", alloc.appetite);
  out << "alpha " << buf << "\n";
  out << "quota " << alloc.quota << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", centers.intensity);
  out << "intensity " << buf << "\n";
  out << "seed " << centers.seed << "\n";
  out << "centers " << centers.count() << "\n";
  out << "end-header\n";

  put(out, alloc.owner.data(), alloc.owner.size() * sizeof(std::int32_t));
  put(out, alloc.tieBits.data(), alloc.tieBits.size() * sizeof(std::uint64_t));
  std::vector<std::int64_t> claimed(alloc.claimed.begin(), alloc.claimed.end());
  put(out, claimed.data(), claimed.size() * sizeof(std::int64_t));
  put(out, alloc.sated.data(), alloc.sated.size());
  put(out, centers.coords.data(), centers.coords.size() * sizeof(double));
  if (!out) throw std::runtime_error("snapshot: write failed");
}

Snapshot readSnapshot(std::istream& in) {
  if (line(in) != "stalloc-snapshot 1")
    throw std::runtime_error("snapshot: unrecognized format line");
  std::string engine = field(in, "engine");
  std::string rng = field(in, "rng");
  int dim = std::stoi(field(in, "dim"));
  std::string topo = field(in, "topology");
  std::istringstream sidesIn(field(in, "sides"));
  std::vector<double> sides;
  double sv;
  while (sidesIn >> sv) sides.push_back(sv);
  if (static_cast<int>(sides.size()) != dim)
    throw std::runtime_error("snapshot: sides count does not match dim");
  double h = std::stod(field(in, "h"));
  double alpha = std::stod(field(in, "alpha"));
  long quota = std::stol(field(in, "quota"));
  double intensity = std::stod(field(in, "intensity"));
  std::uint64_t seed = std::stoull(field(in, "seed"));
  int nCenters = std::stoi(field(in, "centers"));
  if (nCenters < 0) throw std::runtime_error("snapshot: negative center count");
  if (line(in) != "end-header") throw std::runtime_error("snapshot: missing end-header");

  Region region = topo == "torus" ? Region::torus(sides)
                : topo == "box"   ? Region::box(sides)
                                  : throw std::runtime_error("snapshot: unknown topology '" +
                                                             topo + "'");
  Grid grid(region, h);

  Snapshot snap{Allocation{grid, alpha, quota, {}, {}, {}, {}},
                CenterSet{region, intensity, seed, {}}, seed, rng, engine};
  snap.alloc.owner.resize(static_cast<std::size_t>(grid.cellCount));
  snap.alloc.tieBits.resize(static_cast<std::size_t>((grid.cellCount + 63) / 64));
  snap.alloc.claimed.resize(static_cast<std::size_t>(nCenters));
  snap.alloc.sated.resize(static_cast<std::size_t>(nCenters));
  snap.centers.coords.resize(static_cast<std::size_t>(nCenters) * dim);

  take(in, snap.alloc.owner.data(), snap.alloc.owner.size() * sizeof(std::int32_t), "owners");
  take(in, snap.alloc.tieBits.data(), snap.alloc.tieBits.size() * sizeof(std::uint64_t),
       "tie bitset");
  std::vector<std::int64_t> claimed(static_cast<std::size_t>(nCenters));
  take(in, claimed.data(), claimed.size() * sizeof(std::int64_t), "claim counts");
  for (std::size_t i = 0; i < claimed.size(); ++i)
    snap.alloc.claimed[i] = static_cast<long>(claimed[i]);
  take(in, snap.alloc.sated.data(), snap.alloc.sated.size(), "sated flags");
  take(in, snap.centers.coords.data(), snap.centers.coords.size() * sizeof(double),
       "center coordinates");
  return snap;
}

}  // namespace stalloc
