#pragma once

#include <iosfwd>

#include "ftcollapse/io.hpp"

namespace ftcollapse {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

/// Single path via the configured route -> path.csv, manifest.json.
int cmd_simulate(const RunConfig& config, std::ostream& log);

/// Ensemble statistics -> summary.csv, summary.json, manifest.json.
int cmd_ensemble(const RunConfig& config, std::ostream& log);

/// Full verification suite -> report.json, manifest.json. Returns 1 if any test fails.
int cmd_verify(const RunConfig& config, std::ostream& log);

/// Finite/asymptotic time-change identity -> equivalence.json, manifest.json.
int cmd_timechange(const RunConfig& config, std::ostream& log);

/// Maximum equivalence gaps over `n_paths` paths built from pathwise bridges.
EquivalenceReport equivalence_over_paths(const QuantumSystem& system, const ReductionSchedule& schedule,
                                         const TimeGrid& grid, std::size_t n_paths, std::uint64_t master_seed,
                                         bool zero_noise, int threads);

/// Parses argv (`<command> --config <path> [overrides]`) and dispatches.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ftcollapse
