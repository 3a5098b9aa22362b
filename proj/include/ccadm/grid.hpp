#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccadm/learners/config.hpp"
#include "ccadm/metrics.hpp"

namespace ccadm {

struct AssembledTable;

struct GridAxis {
  std::string name;
  std::vector<std::string> values;
};

/// Axes are enumerated lexicographically in declared order: the last axis
/// varies fastest.
struct ParamGrid {
  std::vector<GridAxis> axes;
  Measure objective = Measure::RE;

  std::size_t size() const;
  std::vector<ParamList> enumerate() const;
};

struct GridTrial {
  /// Includes ("window", w) first when a window axis is searched.
  ParamList assignment;
  std::size_t window = 0;
  MetricReport report;
  double objective = 0.0;
};

struct GridResult {
  std::vector<GridTrial> trials;
  std::size_t best = 0;
  Measure objective = Measure::RE;

  const GridTrial& best_trial() const { return trials.at(best); }
};

struct GridSearchOptions {
  /// Searched window sizes; when absent every trial uses `window`.
  std::optional<std::vector<std::size_t>> windows;
  std::size_t window = 7;
  double split = 0.8;
  std::uint64_t seed = 0;
  double eps_re = 1e-9;
  std::size_t workers = 1;
};

/// Evaluates every grid point with the same seed and split and returns all
/// trials in grid order plus the first minimizer of the objective. The
/// objective must be an error measure (AE, RE, RMSE). A trial that hits
/// SeriesTooShortError aborts the search with the assignment in the message.
GridResult grid_search(const LearnerConfig& base, const ParamGrid& grid, const AssembledTable& table,
                       const GridSearchOptions& options);

/// Built-in grids.
namespace grid_presets {

/// Window sizes 1, 3, 5, 7, 10, 20, 30.
std::vector<std::size_t> windows();
/// k in {1, 2, 3, 4, 5, 7, 10, 15, 20}.
ParamGrid knn();
/// max_depth in {1, ..., 10, 15, 20}.
ParamGrid decision_tree();
/// activation {Tanh, Rectifier, ExpRectifier} x epochs {2, 4, 6, 8, 10, 15}.
ParamGrid deep_learning();
/// n_trees {10..100 step 10} x max_depth {3, 5, 7, 15} x learning_rate
/// {0.01, 0.02, 0.03, 0.1} x n_bins {10, 20, 30}: 480 points.
ParamGrid gradient_boosted_trees();
/// Grid by name: "knn", "dt", "dl", "gbt".
ParamGrid by_name(const std::string& name);

}  // namespace grid_presets

}  // namespace ccadm
