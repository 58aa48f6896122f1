#include "stalloc/pointprocess.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "stalloc/rng.hpp"

namespace stalloc {

namespace {

// Place one uniform coordinate in [0, L). The guard matters: u*L can round up
// to exactly L for u just below 1, and a center sitting on the seam would
// break the half-open window contract.
double uniformCoord(SplitMix64& rng, double L) {
  double x = rng.uniform01() * L;
  if (x >= L) x = std::nextafter(L, 0.0);
  return x;
}

void fillUniform(CenterSet& cs, long n, SplitMix64& rng) {
  const int d = cs.region.dim;
  cs.coords.reserve(static_cast<std::size_t>(n) * d);
  for (long k = 0; k < n; ++k)
    for (int l = 0; l < d; ++l)
      cs.coords.push_back(uniformCoord(rng, cs.region.sides[static_cast<std::size_t>(l)]));
}

}  // namespace

CenterSet samplePoisson(const Region& region, double intensity, std::uint64_t seed) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw std::invalid_argument("samplePoisson: intensity must be finite and >= 0");
  CenterSet cs;
  cs.region = region;
  cs.intensity = intensity;
  cs.seed = seed;
  SplitMix64 rng(mix64(seed));
  long n = samplePoissonCount(rng, intensity * region.volume());
  fillUniform(cs, n, rng);
  return cs;
}

CenterSet sampleUniform(const Region& region, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("sampleUniform: count must be >= 0");
  CenterSet cs;
  cs.region = region;
  cs.intensity = count / region.volume();
  cs.seed = seed;
  SplitMix64 rng(mix64(seed));
  fillUniform(cs, count, rng);
  return cs;
}

CenterSet rescaleCenters(const CenterSet& cs, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw std::invalid_argument("rescaleCenters: factor must be positive and finite");
  CenterSet out;
  std::vector<double> sides = cs.region.sides;
  for (double& s : sides) s *= factor;
  out.region = cs.region.topology == Topology::Torus ? Region::torus(sides) : Region::box(sides);
  double shrink = 1.0;
  for (int l = 0; l < cs.region.dim; ++l) shrink /= factor;
  out.intensity = cs.intensity * shrink;
  out.seed = cs.seed;
  out.coords = cs.coords;
  for (double& c : out.coords) c *= factor;
  return out;
}

long countInCube(const CenterSet& cs, const std::vector<long>& index, double m) {
  const int d = cs.region.dim;
  if (static_cast<int>(index.size()) != d)
    throw std::invalid_argument("countInCube: index dimension mismatch");
  if (!(m > 0.0)) throw std::invalid_argument("countInCube: level m must be > 0");
  long n = 0;
  const int nc = cs.count();
  for (int k = 0; k < nc; ++k) {
    const double* x = cs.center(k);
    bool inside = true;
    for (int l = 0; l < d; ++l) {
      double c = m * static_cast<double>(index[static_cast<std::size_t>(l)]);
      if (!(x[l] >= c - m / 2 && x[l] < c + m / 2)) {
        inside = false;
        break;
      }
    }
    if (inside) ++n;
  }
  return n;
}

void writeCenterSet(std::ostream& out, const CenterSet& cs) {
  char buf[64];
  out << cs.region.dim << ' ';
  std::snprintf(buf, sizeof buf, "%.17g", cs.intensity);
  out << buf << ' ' << cs.seed << ' '
      << (cs.region.topology == Topology::Torus ? "torus" : "box");
  for (double s : cs.region.sides) {
    std::snprintf(buf, sizeof buf, "%.17g", s);
    out << ' ' << buf;
  }
  out << '\n';
  const int n = cs.count();
  for (int k = 0; k < n; ++k) {
    const double* x = cs.center(k);
    for (int l = 0; l < cs.region.dim; ++l) {
      std::snprintf(buf, sizeof buf, "%.17g", x[l]);
      out << (l ? " " : "") << buf;
    }
    out << '\n';
  }
}

CenterSet readCenterSet(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("center set: missing header");
  std::istringstream hs(header);
  int d = 0;
  double intensity = 0.0;
  std::uint64_t seed = 0;
  std::string topo;
  if (!(hs >> d >> intensity >> seed >> topo))
    throw std::runtime_error("center set: malformed header '" + header + "'");
  std::vector<double> sides;
  double s = 0.0;
  while (hs >> s) sides.push_back(s);
  if (static_cast<int>(sides.size()) != d)
    throw std::runtime_error("center set: header sides do not match dimension");
  Region region = topo == "torus"  ? Region::torus(sides)
                  : topo == "box" ? Region::box(sides)
                                  : throw std::runtime_error("center set: unknown topology '" + topo + "'");
  CenterSet cs;
  cs.region = region;
  cs.intensity = intensity;
  cs.seed = seed;
  std::string line;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    for (int l = 0; l < d; ++l) {
      double x = 0.0;
      if (!(ls >> x))
        throw std::runtime_error("center set: line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(d) + " coordinates");
      cs.coords.push_back(x);
    }
  }
  return cs;
}

}  // namespace stalloc
