#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "slwave/calibration.hpp"
#include "slwave/config.hpp"
#include "slwave/integrator.hpp"

namespace slwave {

/// Exit codes of the command-line driver.
enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kIoError = 4 };

struct CliOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  int jobs = 1;
  std::optional<double> snapshot_every;
  bool quiet = false;
};

/// Outcome of one simulate run written to a directory.
struct SimulateOutcome {
  RunReport report;
  double max_gradient_final = 0.0;   ///< max |d sigma / dx| on the sample grid at t_final
  double max_sample_c_excess = 0.0;  ///< max over written snapshots of c_i - 1/sqrt(rho)
  std::vector<std::filesystem::path> snapshots;
};

/// Runs the scenario and writes snapshots plus manifest.json into dir.
SimulateOutcome simulate_to_directory(const ScenarioConfig& config,
                                      const std::filesystem::path& dir);

struct SweepRun {
  std::string label;
  MaterialParams material;
  SimulateOutcome outcome;
};

/// Named parameter grids: "b" (b in {0,1,5,10}, a = 1.5), "a" (b = 1, a in {1.5,3,5,10}),
/// "all" (union of both, in that order without duplicates).
std::vector<std::pair<double, double>> sweep_preset(const std::string& name);

/// One run per (b, a) on the base config, each in dir/<label>, up to `jobs` at a time.
/// Rows come back in preset order regardless of scheduling.
std::vector<SweepRun> run_sweep(const ScenarioConfig& base,
                                const std::vector<std::pair<double, double>>& grid, int jobs,
                                const std::filesystem::path& dir);

void write_sweep_summary(std::ostream& out, const std::vector<SweepRun>& runs);

// Subcommand entry points: return an ExitCode and print a JSON error report to
// stderr on failure.
int cmd_mms(StudyKind kind, const CliOptions& opts);
int cmd_simulate(const CliOptions& opts);
int cmd_sweep(const std::string& preset, const CliOptions& opts);
int cmd_fit(const std::filesystem::path& data, std::pair<double, double> init,
            const FitSettings& settings, const CliOptions& opts);
int cmd_gen_data(double b, double a, double sigma_min, double sigma_max, int n, double noise,
                 unsigned seed, const std::filesystem::path& path);

}  // namespace slwave
