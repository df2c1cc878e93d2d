#pragma once

#include "cholera/io/output.hpp"
#include "cholera/io/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cholera::io {

struct RunOptions {
    int grid_refine = 1;            // multiplies n_omega, divides dt
    std::optional<long long> seed;  // recorded in the summary
};

struct RunOutput {
    std::filesystem::path dir;
    std::vector<std::string> files;  // written by this run, manifest excluded
    json summary;
    json manifest;
};

/// Subcommands: within-sim, bifurcate, manifold, r0, equilibria, epi-sim,
/// renewal-check, spectral.
const std::vector<std::string>& subcommands();

/// Runs one analysis and writes its CSV/JSON outputs plus summary.json and
/// manifest.json into `out`.
RunOutput run_command(const std::string& subcommand, const ScenarioConfig& cfg,
                      const std::filesystem::path& out, const RunOptions& options = {});

/// Gnuplot-ready data for fig1 (delta sweep), fig2 (W sweep) or fig3
/// (manifold, nullcline, trajectory) from the outputs of an earlier
/// `bifurcate` or `manifold` run in `out`. Throws ValidationError, writing
/// nothing, when those outputs are missing.
RunOutput emit_plot_data(const std::filesystem::path& out, const std::string& figure);

}  // namespace cholera::io

namespace cholera::cli {

/// Full command-line entry point. Returns the process exit code:
/// 0 success, 2 invalid input, 3 numerical failure, 1 anything else.
int run(const std::vector<std::string>& args);

}  // namespace cholera::cli
