#pragma once

#include <vector>

namespace stalloc {

enum class Topology { Torus, Box };

// Rectangular observation window [0, sides[0]) x ... x [0, sides[d-1]),
// either with periodic boundary (Torus) or as a plain box. All model
// coordinates live inside this window; the torus metric is minimal-image.
struct Region {
  int dim = 0;
  Topology topology = Topology::Torus;
  std::vector<double> sides;

  static Region torus(std::vector<double> sides);
  static Region box(std::vector<double> sides);

  double volume() const;

  // Signed displacement a-b along one axis, wrapped to [-L/2, L/2] on a torus.
  double axisDelta(double a, double b, int axis) const;

  double distanceSq(const double* a, const double* b) const;
  double distance(const double* a, const double* b) const;

  bool contains(const double* x) const;
  bool sameShape(const Region& other) const;
};

}  // namespace stalloc
