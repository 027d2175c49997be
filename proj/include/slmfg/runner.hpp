#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "slmfg/fixed_point.hpp"
#include "slmfg/grid.hpp"
#include "slmfg/problem.hpp"
#include "slmfg/run_config.hpp"

namespace slmfg {

enum ExitCode : int { exit_success = 0, exit_usage = 1, exit_not_converged = 2 };

Grid make_grid(const RunConfig& cfg, const MfgProblem& problem);
MfgProblem make_problem(const RunConfig& cfg);

struct RunOutcome {
    int exit_code = exit_success;
    MfgSolution solution;
    std::vector<std::filesystem::path> files;
};

/// Solves the configured problem and writes density.csv, value.csv,
/// errors.csv, moments.csv (and drift.csv if requested) plus summary.json
/// into cfg.out_dir. Artifacts are written even when the iteration did not
/// converge. Output bytes depend only on the configuration.
RunOutcome run(const RunConfig& cfg, std::ostream* log = nullptr);

/// Property checks on a solved run; prints one line per check.
int validate(const RunConfig& cfg, std::ostream& out);

/// Compares the push-forward density with a Monte-Carlo simulation of the
/// associated Markov chain and writes oracle.csv (k, t, d1).
int oracle(const RunConfig& cfg, std::ostream& out);

void write_field_csv(const std::filesystem::path& path, const SpaceTimeField& field,
                     const Grid& grid, const char* value_name, bool with_density);

/// Reads the weight column (m_{i,k}) of a density.csv back into a field.
DensityField read_density_csv(const std::filesystem::path& path, std::size_t num_nodes,
                              std::size_t num_slices);

}  // namespace slmfg
