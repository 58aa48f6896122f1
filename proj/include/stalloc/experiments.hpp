#pragma once

#include "stalloc/config.hpp"

// One function per CLI verb. Each validates its configuration (unknown keys
// and out-of-range values raise ConfigError), runs the experiment, writes its
// output files plus a manifest into the resolved output directory, and
// returns the process exit code. Runtime failures (unwritable directory,
// broken snapshot file) surface as ordinary exceptions for main to map.

namespace stalloc {

int runAllocate(const Config& cfg);
int runSweep(const Config& cfg);
int runPm(const Config& cfg);
int runTailbound(const Config& cfg);
int runDiagnostics(const Config& cfg);
int runRender(const Config& cfg);

}  // namespace stalloc
