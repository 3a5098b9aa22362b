#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccadm/date.hpp"
#include "ccadm/learners/config.hpp"
#include "ccadm/metrics.hpp"
#include "ccadm/scenario.hpp"

namespace ccadm {

class DataRepository;

struct RunConfig {
  ScenarioSuite suite;
  std::vector<LearnerConfig> algorithms;
  std::size_t window = 7;
  double split = 0.8;
  std::uint64_t seed = 0;
  double eps_re = 1e-9;
  std::size_t workers = 1;

  /// Window/split/learners from the suite defaults, Table-6 parameters.
  static RunConfig from_suite(ScenarioSuite suite);
  /// Throws ConfigError on an invalid setting or duplicate algorithm names.
  void validate() const;
};

struct PredictionPoint {
  Date date;
  double actual = 0.0;
  double predicted = 0.0;

  friend bool operator==(const PredictionPoint&, const PredictionPoint&) = default;
};

struct CellFailure {
  std::string kind;
  std::string message;

  friend bool operator==(const CellFailure&, const CellFailure&) = default;
};

/// Result of one (scenario, algorithm) cell. A failed cell keeps its
/// identifying fields and carries `failure`; metrics and predictions are then
/// empty.
struct EvaluationRecord {
  std::string scenario_id;
  ScenarioLabel label;
  std::string location;
  std::string algorithm;
  ParamList params;
  std::uint64_t seed = 0;
  MetricReport metrics;
  std::vector<PredictionPoint> predictions;
  std::size_t train_size = 0;
  std::chrono::nanoseconds duration{0};
  std::optional<CellFailure> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

/// Per-cell seed: FNV-1a of (seed, scenario id, algorithm name).
std::uint64_t cell_seed(std::uint64_t seed, const std::string& scenario_id, const std::string& algorithm);

using ProgressFn = std::function<void(const EvaluationRecord& record, std::size_t done, std::size_t total)>;

/// Evaluates every scenario x algorithm cell: scenario-major, algorithm-minor
/// order regardless of worker count. Cell errors become failed records.
/// Throws SuiteFailedError when every cell fails.
std::vector<EvaluationRecord> run_suite(const DataRepository& repo, const RunConfig& config,
                                        const ProgressFn& progress = {});

/// Re-evaluates one cell exactly as `run_suite` would. Throws
/// CellNotFoundError for an unknown scenario id or algorithm name.
EvaluationRecord rerun_cell(const DataRepository& repo, const RunConfig& config, const std::string& scenario_id,
                            const std::string& algorithm);

}  // namespace ccadm
