#pragma once

#include <string>
#include <string_view>

#include "heatclf/experiment.hpp"

namespace heatclf {

/// Parses the flat `key = value` experiment format (described in README.md).
/// Relative dataset paths resolve against `base_dir`. Unknown keys are
/// reported together in one error.
ExperimentConfig parse_experiment_config(std::string_view text, const std::string& base_dir = ".");

ExperimentConfig load_experiment_config(const std::string& path);

struct BenchOutcome {
  /// Human-readable summary, one line per aggregate or grid verdict.
  std::string summary;
  /// False when a grid task has failing points or runs failed.
  bool ok = true;
};

/// Runs the configured task and writes its CSV files into out_dir (created
/// if missing): results.csv + aggregate.csv (+ failures.csv) for experiment
/// tasks, grid.csv for grid tasks.
BenchOutcome run_bench(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace heatclf
