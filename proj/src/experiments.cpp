#include "stalloc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/boolean_model.hpp"
#include "stalloc/grid.hpp"
#include "stalloc/majorant.hpp"
#include "stalloc/parallel.hpp"
#include "stalloc/percolation.hpp"
#include "stalloc/pointprocess.hpp"
#include "stalloc/render.hpp"
#include "stalloc/rng.hpp"
#include "stalloc/snapshot.hpp"
#include "stalloc/version.hpp"

namespace fs = std::filesystem;

namespace stalloc {

namespace {

using KV = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string fmt(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += fmt(v[i]);
  }
  return s;
}

const char* fmt(bool v) { return v ? "true" : "false"; }

fs::path resolveOutdir(const Config& cfg) {
  std::string dir = cfg.getString("outdir", "");
  if (dir.empty()) {
    const char* env = std::getenv("STALLOC_OUTDIR");
    if (env && *env) dir = env;
  }
  if (dir.empty()) dir = ".";
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p))
    throw std::runtime_error("cannot create output directory '" + dir + "'");
  return p;
}

std::ofstream openText(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

std::ofstream openBinary(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

// Every verb records the parameters it actually ran with; the manifest parses
// back as a config file, so a run can be reproduced from its output alone.
void writeManifest(const fs::path& outdir, const std::string& verb, const KV& resolved) {
  auto out = openText(outdir / "manifest.txt");
  out << "# experiment manifest; feed back with --config to reproduce this run\n";
  out << "# verb: " << verb << "\n";
  out << "# engine: " << kEngineVersion << "\n";
  out << "# rng: " << kRngId << "\n";
  for (const auto& [k, v] : resolved) out << k << " = " << v << "\n";
}

int readDim(const Config& cfg) {
  long dim = cfg.getLong("dim", 2);
  if (dim < 2 || dim > 8)
    throw ConfigError(cfg.location("dim") + ": supported dimensions are 2..8");
  return static_cast<int>(dim);
}

Region readRegion(const Config& cfg, int dim, const char* defaultTopology,
                  double defaultSide) {
  std::string topo = cfg.getString("topology", defaultTopology);
  std::vector<double> sides = cfg.getDoubleList(
      "sides", std::vector<double>(static_cast<std::size_t>(dim), defaultSide));
  if (sides.size() == 1 && dim > 1) sides.assign(static_cast<std::size_t>(dim), sides[0]);
  if (static_cast<int>(sides.size()) != dim)
    throw ConfigError(cfg.location("sides") + ": need one entry or one per axis");
  for (double s : sides)
    if (!(s > 0.0)) throw ConfigError(cfg.location("sides") + ": sides must be positive");
  if (topo == "torus") return Region::torus(sides);
  if (topo == "box") return Region::box(sides);
  throw ConfigError(cfg.location("topology") + ": expected 'torus' or 'box'");
}

double readGridStep(const Config& cfg, const Region& region, double fallback) {
  double h = cfg.getDouble("h", fallback);
  if (!(h > 0.0)) throw ConfigError(cfg.location("h") + ": grid step must be positive");
  for (double L : region.sides) {
    long n = std::llround(L / h);
    if (n < 1 || std::abs(L - static_cast<double>(n) * h) > 1e-9 * std::max(1.0, L))
      throw ConfigError(cfg.location("h") + ": must divide side " + fmt(L) + " evenly");
  }
  return h;
}

double readNonnegative(const Config& cfg, const char* key, double fallback) {
  double v = cfg.getDouble(key, fallback);
  if (!(v >= 0.0))
    throw ConfigError(cfg.location(key) + ": must be nonnegative");
  return v;
}

long readReplicas(const Config& cfg, long fallback, long minimum) {
  long r = cfg.getLong("replicas", fallback);
  if (r < minimum)
    throw ConfigError(cfg.location("replicas") + ": need at least " + std::to_string(minimum));
  return r;
}

Adjacency readAdjacency(const Config& cfg) {
  std::string a = cfg.getString("adjacency", "face");
  if (a == "face") return Adjacency::Face;
  if (a == "face-corner") return Adjacency::FaceCorner;
  throw ConfigError(cfg.location("adjacency") + ": expected 'face' or 'face-corner'");
}

const char* adjacencyName(Adjacency a) {
  return a == Adjacency::Face ? "face" : "face-corner";
}

int readThreads(const Config& cfg) {
  long t = cfg.getLong("threads", 1);
  if (t < 1 || t > 256) throw ConfigError(cfg.location("threads") + ": expected 1..256");
  return static_cast<int>(t);
}

void appendGeometry(KV& kv, const Region& region) {
  kv.emplace_back("dim", std::to_string(region.dim));
  kv.emplace_back("topology", region.topology == Topology::Torus ? "torus" : "box");
  kv.emplace_back("sides", fmt(region.sides));
}

void maybeKeepOutdir(KV& kv, const Config& cfg) {
  if (cfg.has("outdir")) kv.emplace_back("outdir", cfg.getString("outdir", ""));
}

}  // namespace

int runAllocate(const Config& cfg) {
  cfg.requireOnly({"dim", "topology", "sides", "h", "lambda", "alpha", "seed", "outdir",
                   "render", "snapshot", "verify"});
  int dim = readDim(cfg);
  Region region = readRegion(cfg, dim, "torus", 20.0);
  double h = readGridStep(cfg, region, 0.05);
  double lambda = readNonnegative(cfg, "lambda", 1.0);
  double alpha = readNonnegative(cfg, "alpha", 1.0);
  std::uint64_t seed = cfg.getSeed("seed", 1);
  bool render = cfg.getBool("render", dim == 2);
  bool snapshot = cfg.getBool("snapshot", true);
  bool verify = cfg.getBool("verify", true);
  if (render && dim != 2)
    throw ConfigError(cfg.location("render") + ": images are 2D only");
  fs::path outdir = resolveOutdir(cfg);

  Grid grid(region, h);
  CenterSet centers = samplePoisson(region, lambda, seed);
  Allocation alloc = computeAllocation(centers, grid, alpha);

  {
    auto out = openText(outdir / "stats.txt");
    out << "centers = " << centers.count() << "\n";
    out << "cells = " << grid.cellCount << "\n";
    out << "quota = " << alloc.quota << "\n";
    out << "realized_appetite = " << fmt(static_cast<double>(alloc.quota) * grid.cellVolume())
        << "\n";
    out << "claimed_cells = " << alloc.claimedCellCount() << "\n";
    out << "disputed_cells = " << alloc.disputedCellCount() << "\n";
    out << "claimed_fraction = "
        << fmt(static_cast<double>(alloc.claimedCellCount()) /
               static_cast<double>(grid.cellCount))
        << "\n";
    out << "sated_fraction = " << fmt(alloc.satedFraction()) << "\n";
    if (verify)
      out << "unstable_pairs = " << verifyStability(alloc, centers).size() << "\n";
  }
  if (snapshot) {
    auto out = openBinary(outdir / "snapshot.bin");
    writeSnapshot(out, alloc, centers);
  }
  if (render) {
    {
      auto out = openBinary(outdir / "alloc.ppm");
      renderAllocation(out, alloc, centers);
    }
    {
      auto out = openBinary(outdir / "claimed.ppm");
      renderMask(out, claimedMask(alloc));
    }
  }

  KV kv;
  appendGeometry(kv, region);
  kv.emplace_back("h", fmt(h));
  kv.emplace_back("lambda", fmt(lambda));
  kv.emplace_back("alpha", fmt(alpha));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("render", fmt(render));
  kv.emplace_back("snapshot", fmt(snapshot));
  kv.emplace_back("verify", fmt(verify));
  maybeKeepOutdir(kv, cfg);
  writeManifest(outdir, "allocate", kv);
  return 0;
}

int runSweep(const Config& cfg) {
  cfg.requireOnly({"dim", "topology", "sides", "h", "lambda", "alphas", "replicas", "seed",
                   "adjacency", "threads", "outdir"});
  int dim = readDim(cfg);
  Region region = readRegion(cfg, dim, "box", 20.0);
  if (region.topology != Topology::Box)
    throw ConfigError(cfg.location("topology") + ": crossing sweeps need a box window");
  double h = readGridStep(cfg, region, 0.05);
  double lambda = readNonnegative(cfg, "lambda", 1.0);
  std::vector<double> alphas =
      cfg.getDoubleList("alphas", {0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85});
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i - 1]))
      throw ConfigError(cfg.location("alphas") + ": appetites must be strictly increasing");
  long replicas = readReplicas(cfg, 200, 1);
  std::uint64_t seed = cfg.getSeed("seed", 1);
  Adjacency adj = readAdjacency(cfg);
  int threads = readThreads(cfg);
  fs::path outdir = resolveOutdir(cfg);

  SweepResult res = sweepAlpha(region, h, lambda, alphas, replicas, seed, adj, threads);
  {
    auto out = openText(outdir / "sweep.csv");
    writeSweepCsv(out, res);
  }
  {
    auto out = openText(outdir / "threshold.txt");
    writeThresholdBlock(out, res);
  }

  KV kv;
  appendGeometry(kv, region);
  kv.emplace_back("h", fmt(h));
  kv.emplace_back("lambda", fmt(lambda));
  kv.emplace_back("alphas", fmt(alphas));
  kv.emplace_back("replicas", std::to_string(replicas));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("adjacency", adjacencyName(adj));
  kv.emplace_back("threads", std::to_string(threads));
  maybeKeepOutdir(kv, cfg);
  writeManifest(outdir, "sweep", kv);
  return 0;
}

int runPm(const Config& cfg) {
  cfg.requireOnly({"dim", "m", "lambda", "replicas", "seed", "adjacency", "threads", "outdir"});
  int dim = readDim(cfg);
  double m = cfg.getDouble("m", 7.0);
  if (!(m > 0.0)) throw ConfigError(cfg.location("m") + ": block size must be positive");
  double lambda = readNonnegative(cfg, "lambda", 0.15);
  long replicas = readReplicas(cfg, 1000, 1);
  std::uint64_t seed = cfg.getSeed("seed", 1);
  Adjacency adj = readAdjacency(cfg);
  int threads = readThreads(cfg);
  fs::path outdir = resolveOutdir(cfg);

  PmEstimate est = estimatePm(dim, m, lambda, replicas, seed, adj, threads);
  {
    auto out = openText(outdir / "pm.txt");
    out << "m = " << fmt(est.m) << "\n";
    out << "lambda = " << fmt(est.lambda) << "\n";
    out << "replicas = " << est.replicas << "\n";
    out << "passable = " << est.successes << "\n";
    out << "p_hat = " << fmt(est.pHat) << "\n";
    out << "ci_lo = " << fmt(est.ciLo) << "\n";
    out << "ci_hi = " << fmt(est.ciHi) << "\n";
    out << "adjacency = " << adjacencyName(adj) << "\n";
    out << "window_side = " << fmt(4.0 * m) << "\n";
  }

  KV kv;
  kv.emplace_back("dim", std::to_string(dim));
  kv.emplace_back("m", fmt(m));
  kv.emplace_back("lambda", fmt(lambda));
  kv.emplace_back("replicas", std::to_string(replicas));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("adjacency", adjacencyName(adj));
  kv.emplace_back("threads", std::to_string(threads));
  maybeKeepOutdir(kv, cfg);
  writeManifest(outdir, "pm", kv);
  return 0;
}

int runTailbound(const Config& cfg) {
  cfg.requireOnly({"dim", "lambda", "avalues", "replicas", "seed", "threads", "outdir"});
  int dim = readDim(cfg);
  double lambda = cfg.getDouble("lambda", 0.01);
  if (!(lambda > 0.0))
    throw ConfigError(cfg.location("lambda") + ": the bound needs a positive intensity");
  std::vector<double> avalues = cfg.getDoubleList("avalues", {1.0, 2.0, 3.0});
  for (double a : avalues)
    if (!(a > 0.0))
      throw ConfigError(cfg.location("avalues") + ": radii must be positive");
  long replicas = readReplicas(cfg, 1000, 0);
  std::uint64_t seed = cfg.getSeed("seed", 1);
  int threads = readThreads(cfg);
  fs::path outdir = resolveOutdir(cfg);

  // Empirical side: the reach radius of the cube in the middle of a box just
  // large enough that every radius up to max(a) is decided by counts the
  // window fully contains.
  double maxA = *std::max_element(avalues.begin(), avalues.end());
  long side = 2 * static_cast<long>(std::ceil(searchFactor(dim) * maxA)) + 4;
  std::vector<double> reach(static_cast<std::size_t>(replicas), 0.0);
  if (replicas > 0) {
    Region window =
        Region::box(std::vector<double>(static_cast<std::size_t>(dim), static_cast<double>(side)));
    std::vector<long> probe(static_cast<std::size_t>(dim), side / 2);
    runReplicas(replicas, threads, [&](long r) {
      CenterSet cs =
          samplePoisson(window, lambda, replicaSeed(seed, static_cast<std::uint64_t>(r)));
      reach[static_cast<std::size_t>(r)] = reachRadius(countField(cs), probe);
    });
  }

  {
    auto out = openText(outdir / "tailbound.csv");
    out << "a,bound,exceedances,replicas,empirical,se\n";
    char line[200];
    for (double a : avalues) {
      double bound = chernoffTailBound(a, lambda, dim);
      if (replicas > 0) {
        long exceed = 0;
        for (long r = 0; r < replicas; ++r)
          if (reach[static_cast<std::size_t>(r)] > a) ++exceed;
        double p = static_cast<double>(exceed) / static_cast<double>(replicas);
        double se = std::sqrt(p * (1.0 - p) / static_cast<double>(replicas));
        std::snprintf(line, sizeof line, "%.17g,%.9g,%ld,%ld,%.9g,%.9g\n", a, bound, exceed,
                      replicas, p, se);
      } else {
        std::snprintf(line, sizeof line, "%.17g,%.9g,,,,\n", a, bound);
      }
      out << line;
    }
  }

  KV kv;
  kv.emplace_back("dim", std::to_string(dim));
  kv.emplace_back("lambda", fmt(lambda));
  kv.emplace_back("avalues", fmt(avalues));
  kv.emplace_back("replicas", std::to_string(replicas));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("threads", std::to_string(threads));
  maybeKeepOutdir(kv, cfg);
  writeManifest(outdir, "tailbound", kv);
  return 0;
}

int runDiagnostics(const Config& cfg) {
  cfg.requireOnly({"dim", "topology", "sides", "h", "lambda", "alpha", "replicas", "seed",
                   "threads", "outdir"});
  int dim = readDim(cfg);
  Region region = readRegion(cfg, dim, "torus", 10.0);
  if (region.topology == Topology::Torus) {
    for (double L : region.sides)
      if (std::abs(L - std::llround(L)) > 1e-9 * std::max(1.0, L))
        throw ConfigError(cfg.location("sides") +
                          ": the containment check needs integer torus sides");
  }
  double h = readGridStep(cfg, region, 0.05);
  double lambda = readNonnegative(cfg, "lambda", 1.0);
  double alpha = readNonnegative(cfg, "alpha", 1.0);
  long replicas = readReplicas(cfg, 100, 1);
  std::uint64_t seed = cfg.getSeed("seed", 1);
  int threads = readThreads(cfg);
  fs::path outdir = resolveOutdir(cfg);

  Grid grid(region, h);
  std::vector<long> unstable(static_cast<std::size_t>(replicas), 0);
  std::vector<long> uncontained(static_cast<std::size_t>(replicas), 0);
  std::vector<long> undominated(static_cast<std::size_t>(replicas), 0);
  runReplicas(replicas, threads, [&](long r) {
    CenterSet cs =
        samplePoisson(region, lambda, replicaSeed(seed, static_cast<std::uint64_t>(r)));
    Allocation alloc = computeAllocation(cs, grid, alpha);
    unstable[static_cast<std::size_t>(r)] =
        static_cast<long>(verifyStability(alloc, cs).size());
    undominated[static_cast<std::size_t>(r)] =
        static_cast<long>(dominationCheck(alloc, cs).size());
    uncontained[static_cast<std::size_t>(r)] = static_cast<long>(
        verifyContainment(alloc, cs, reachField(countField(cs))).size());
  });
  long totalUnstable = 0, totalUncontained = 0, totalUndominated = 0;
  for (long r = 0; r < replicas; ++r) {
    totalUnstable += unstable[static_cast<std::size_t>(r)];
    totalUncontained += uncontained[static_cast<std::size_t>(r)];
    totalUndominated += undominated[static_cast<std::size_t>(r)];
  }

  {
    auto out = openText(outdir / "diagnostics.txt");
    out << "replicas = " << replicas << "\n";
    out << "unstable_pairs = " << totalUnstable << "\n";
    out << "containment_violations = " << totalUncontained << "\n";
    out << "domination_violations = " << totalUndominated << "\n";
    out << "all_ok = "
        << fmt(totalUnstable == 0 && totalUncontained == 0 && totalUndominated == 0) << "\n";
  }

  KV kv;
  appendGeometry(kv, region);
  kv.emplace_back("h", fmt(h));
  kv.emplace_back("lambda", fmt(lambda));
  kv.emplace_back("alpha", fmt(alpha));
  kv.emplace_back("replicas", std::to_string(replicas));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("threads", std::to_string(threads));
  maybeKeepOutdir(kv, cfg);
  writeManifest(outdir, "diagnostics", kv);
  return 0;
}

int runRender(const Config& cfg) {
  cfg.requireOnly({"snapshot", "out", "outdir"});
  std::string snapPath = cfg.requireString("snapshot");
  std::string outName = cfg.getString("out", "render.ppm");
  std::ifstream in(snapPath, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot '" + snapPath + "'");
  Snapshot snap = readSnapshot(in);
  fs::path outdir = resolveOutdir(cfg);
  {
    auto out = openBinary(outdir / outName);
    renderAllocation(out, snap.alloc, snap.centers);
  }

  KV kv;
  kv.emplace_back("snapshot", snapPath);
  kv.emplace_back("out", outName);
  maybeKeepOutdir(kv, cfg);
  writeManifest(outdir, "render", kv);
  return 0;
}

}  // namespace stalloc
