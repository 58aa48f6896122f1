#include "stalloc/region.hpp"

#include <cmath>
#include <stdexcept>

namespace stalloc {

namespace {
Region make(std::vector<double> sides, Topology t) {
  Region r;
  r.dim = static_cast<int>(sides.size());
  if (r.dim < 2) throw std::invalid_argument("Region: dimension must be >= 2");
  for (double s : sides)
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("Region: sides must be positive and finite");
  r.topology = t;
  r.sides = std::move(sides);
  return r;
}
}  // namespace

Region Region::torus(std::vector<double> sides) { return make(std::move(sides), Topology::Torus); }
Region Region::box(std::vector<double> sides) { return make(std::move(sides), Topology::Box); }

double Region::volume() const {
  double v = 1.0;
  for (double s : sides) v *= s;
  return v;
}

double Region::axisDelta(double a, double b, int axis) const {
  double d = a - b;
  if (topology == Topology::Torus) {
    // std::remainder lands exactly in [-L/2, L/2]: the minimal image.
    d = std::remainder(d, sides[static_cast<std::size_t>(axis)]);
  }
  return d;
}

double Region::distanceSq(const double* a, const double* b) const {
  double s = 0.0;
  for (int l = 0; l < dim; ++l) {
    double d = axisDelta(a[l], b[l], l);
    s += d * d;
  }
  return s;
}

double Region::distance(const double* a, const double* b) const {
  return std::sqrt(distanceSq(a, b));
}

bool Region::contains(const double* x) const {
  for (int l = 0; l < dim; ++l)
    if (!(x[l] >= 0.0 && x[l] < sides[static_cast<std::size_t>(l)])) return false;
  return true;
}

bool Region::sameShape(const Region& other) const {
  return dim == other.dim && topology == other.topology && sides == other.sides;
}

}  // namespace stalloc
