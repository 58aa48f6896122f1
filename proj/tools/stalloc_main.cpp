// Command-line front end. Each verb maps onto one experiment runner; flags
// mirror config-file keys one-to-one, and --config plus flag overrides compose
// (flags win). Exit codes: 0 success, 2 configuration problem, 3 runtime
// failure.
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stalloc/config.hpp"
#include "stalloc/experiments.hpp"
#include "stalloc/version.hpp"

namespace {

struct VerbSpec {
  const char* name;
  const char* help;
  std::vector<const char*> keys;
  int (*run)(const stalloc::Config&);
};

struct VerbState {
  CLI::App* sub = nullptr;
  const VerbSpec* spec = nullptr;
  std::string configPath;
  std::map<std::string, std::string> flagValues;
};

const std::vector<VerbSpec> kVerbs = {
    {"allocate",
     "sample centers and compute one allocation",
     {"dim", "topology", "sides", "h", "lambda", "alpha", "seed", "outdir", "render",
      "snapshot", "verify"},
     &stalloc::runAllocate},
    {"sweep",
     "estimate crossing probability across appetites",
     {"dim", "topology", "sides", "h", "lambda", "alphas", "replicas", "seed", "adjacency",
      "threads", "outdir"},
     &stalloc::runSweep},
    {"pm",
     "estimate the passable-block probability for one block size",
     {"dim", "m", "lambda", "replicas", "seed", "adjacency", "threads", "outdir"},
     &stalloc::runPm},
    {"tailbound",
     "compare reach-radius tails against the analytic bound",
     {"dim", "lambda", "avalues", "replicas", "seed", "threads", "outdir"},
     &stalloc::runTailbound},
    {"diagnostics",
     "re-check structural invariants over many realizations",
     {"dim", "topology", "sides", "h", "lambda", "alpha", "replicas", "seed", "threads",
      "outdir"},
     &stalloc::runDiagnostics},
    {"render",
     "draw a stored snapshot as an image",
     {"snapshot", "out", "outdir"},
     &stalloc::runRender},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable-allocation simulator and analysis toolkit"};
  app.set_version_flag("--version", std::string(stalloc::kEngineVersion));
  app.require_subcommand(1);

  std::vector<VerbState> states(kVerbs.size());
  for (std::size_t i = 0; i < kVerbs.size(); ++i) {
    const VerbSpec& spec = kVerbs[i];
    VerbState& st = states[i];
    st.spec = &spec;
    st.sub = app.add_subcommand(spec.name, spec.help);
    // The grid-step key is literally "h", so the verb cannot keep the short -h
    // help alias; long-form --help stays available everywhere.
    st.sub->set_help_flag("--help", "print this help message and exit");
    st.sub->add_option("--config", st.configPath, "config file with key = value lines");
    for (const char* key : spec.keys)
      st.sub->add_option(std::string("--") + key, st.flagValues[key],
                         std::string("config key '") + key + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (VerbState& st : states) {
    if (!st.sub->parsed()) continue;
    try {
      stalloc::Config cfg = st.configPath.empty()
                                ? stalloc::Config()
                                : stalloc::Config::fromFile(st.configPath);
      for (const char* key : st.spec->keys)
        if (st.sub->count(std::string("--") + key) > 0)
          cfg.setOverride(key, st.flagValues[key]);
      return st.spec->run(cfg);
    } catch (const stalloc::ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 3;
    }
  }
  return 2;
}
