#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "logflow/app/config.hpp"
#include "logflow/expander.hpp"
#include "logflow/flow.hpp"

namespace logflow::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitCheck = 4,
};

struct CheckOutcome {
  Check check;
  double value = 0.0;
  bool present = false;
  bool passed = false;
};

struct ExperimentResult {
  /// {"name", "pipeline", "metrics": {...}, "warnings": [...]}; free of
  /// timings so identical configs give identical files.
  nlohmann::json summary;
  /// Pipeline-specific detail (series, fits, certification).
  nlohmann::json report;
  std::vector<Snapshot> snapshots;
  std::vector<MonitorRecord> monitors;
  /// Extra CSV artifacts, file name -> content.
  std::vector<std::pair<std::string, std::string>> tables;
  std::vector<CheckOutcome> checks;
  bool checks_passed = true;
};

/// Initial data of the config sampled on its grid, including seeded noise.
GridFunction initial_grid_function(const ExperimentConfig& config);
BoundaryModel boundary_model(const ExperimentConfig& config, const GridFunction& u0);
std::vector<double> snapshot_times(const ExperimentConfig& config);

/// Runs the configured pipeline and analysis in memory.
ExperimentResult execute(const ExperimentConfig& config);

std::vector<CheckOutcome> evaluate_checks(const std::vector<Check>& checks, const nlohmann::json& summary);

/// Writes config.yaml, snapshots/, monitors.csv, summary.json, report.json,
/// any extra tables and finally manifest.json (sha256 of every file plus the
/// creation time).
void write_artifacts(const ExperimentConfig& config, const ExperimentResult& result,
                     const std::filesystem::path& dir);

struct RunOptions {
  /// Overrides config.output when non-empty.
  std::filesystem::path output;
  bool check = false;
  bool quiet = false;
};

/// execute + write_artifacts with the exit-code contract: 0 success,
/// 2 config error, 3 numerical abort, 4 check failure (with `check`),
/// 1 anything else. Errors are reported on stderr.
int run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Runs independent experiments on a pool of LOGFLOW_THREADS workers
/// (default: hardware concurrency); returns the largest exit code.
int run_experiments(const std::vector<ExperimentConfig>& configs, const RunOptions& options);

int worker_count();

}  // namespace logflow::app
