// Named experiments: each writes diagnostics CSVs, field dumps, verdicts and a
// manifest into the configured output directory.
#pragma once

#include "io.hpp"

#include <functional>
#include <string>

namespace nslab {

enum ExitCode { kExitPass = 0, kExitVerdictFail = 1, kExitConfig = 2, kExitNumerical = 3 };

// Never throws for module or I/O failures; those land in the manifest's error
// field and exit code.  The manifest is written in every case.
RunManifest run(const ExperimentConfig& cfg);

// Runs `body` over [0, n) on `threads` workers; results must be written to
// per-index slots so the outcome does not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

// Equation label for a module exception message, or "precondition".
std::string error_tag(const std::string& message);

}  // namespace nslab
