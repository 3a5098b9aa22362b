#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccadm/dataset.hpp"
#include "ccadm/grid.hpp"
#include "ccadm/runner.hpp"

namespace ccadm {

/// The `optimize` section of a run configuration.
struct OptimizeSpec {
  std::string scenario_id;
  /// Name of an entry in the algorithm list, or a bare algorithm short name.
  std::string algorithm;
  ParamGrid grid;
  std::optional<std::vector<std::size_t>> windows;
};

/// Everything one JSON run configuration describes.
///
///     {
///       "data_dir": "data",
///       "delimiter": ",",
///       "extension": ".csv",
///       "scenario_file": "scenarios.csv",
///       "presets": [{"main": "S1", "target": "hum", "context": "temp",
///                    "neighbors": ["S2", "S3", "S4"], "neighbor_attribute": "hum"}],
///       "algorithms": ["KNN", {"algorithm": "DT", "name": "DT6", "params": {"max_depth": 6}}],
///       "window": 7, "split": 0.8, "seed": 42, "eps_re": 1e-9, "workers": 1,
///       "optimize": {"scenario": "S1-cadm", "algorithm": "GBT", "grid": "gbt",
///                    "windows": "preset", "objective": "RE"}
///     }
///
/// Exactly one of `scenario_file`, `presets` and `scenario_matrix` (the
/// scenario file's lines inline) names the suite. Relative paths resolve
/// against the configuration file's directory. Unknown keys are rejected.
struct ExperimentConfig {
  std::filesystem::path data_dir;
  LoadOptions load;
  std::string extension = ".csv";
  RunConfig run;
  std::optional<OptimizeSpec> optimize;
};

/// Scalar settings a command line may override.
struct Overrides {
  std::optional<std::size_t> window;
  std::optional<double> split;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

/// Parses JSON text. `base_dir` anchors relative paths. Throws ConfigError
/// (or the scenario reader's ParseError) on invalid content.
ExperimentConfig parse_experiment(const std::string& json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// A self-contained JSON form of the configuration: absolute data path,
/// the suite inline, every learner parameter spelled out. Loading it back
/// reproduces the same run. The worker count is left out since it cannot
/// change results.
std::string snapshot_json(const ExperimentConfig& config);

/// Loads the repository the configuration points at.
DataRepository load_data(const ExperimentConfig& config);

}  // namespace ccadm
