#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stalloc/mask.hpp"
#include "stalloc/region.hpp"

namespace stalloc {

// Connected components of a boolean lattice mask. Labels are 1-based and
// deterministic: component k is the one whose smallest flat index comes k-th
// in scan order; 0 marks background. Torus masks wrap; crossing queries only
// make sense (and are only allowed) in box mode.
struct ClusterLabeling {
  std::vector<long> dims;
  Topology topology = Topology::Box;
  std::vector<std::int32_t> label;
  std::int32_t componentCount = 0;
  std::vector<long> size;               // per component, 1-based minus one
  std::vector<long> bboxLo, bboxHi;     // component*dim + axis, raw indices
};

ClusterLabeling labelClusters(const GridMask& mask, Adjacency adj);

struct CrossingReport {
  bool crosses = false;
  std::int32_t componentId = 0;  // one witnessing component, 0 if none
};

// Does some component touch both extreme layers of `axis`? Box masks only.
CrossingReport crossing(const ClusterLabeling& labeling, int axis);

// Crossing of the complement (the unclaimed side of a claimed mask).
CrossingReport vacantCrossing(const GridMask& mask, int axis, Adjacency adj);

struct SweepPoint {
  double alpha;
  double pHat, ciLo, ciHi;
  long replicas, crossings;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double alphaHat = 0.0, alphaHatLo = 0.0, alphaHatHi = 0.0;  // NaN when undetermined
  std::string method;  // "logistic-mle", "interval-bisection", or "undetermined"
  // provenance
  int dim = 0;
  std::vector<double> sides;
  double h = 0.0, lambda = 0.0;
  Adjacency adjacency = Adjacency::Face;
  std::uint64_t seed = 0;
  long replicas = 0;
};

// Crossing probability of the claimed set along axis 0 as a function of
// appetite, on independent replicas. Each replica draws one configuration
// and reuses it for every appetite, so the per-replica crossing indicators
// are coupled and the estimated curve is exactly nondecreasing. The curve's
// half-way point is located by a logistic fit (bisection between bracketing
// points if the fit fails); the result records which method produced it.
SweepResult sweepAlpha(const Region& region, double h, double lambda,
                       const std::vector<double>& alphas, long replicas,
                       std::uint64_t seed, Adjacency adj, int threads);

// Coupled pair at a shared configuration: crossing at the smaller appetite
// must imply crossing at the larger. Returns whether the implication held.
bool monotoneCrossingCheck(const Region& region, double h, double lambda,
                           double alphaLow, double alphaHigh, std::uint64_t seed,
                           Adjacency adj);

void writeSweepCsv(std::ostream& out, const SweepResult& r);
void writeThresholdBlock(std::ostream& out, const SweepResult& r);

}  // namespace stalloc
