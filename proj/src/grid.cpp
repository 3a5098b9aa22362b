#include "ccadm/grid.hpp"

#include <fmt/format.h>

#include "ccadm/errors.hpp"
#include "ccadm/parallel.hpp"
#include "ccadm/pipeline.hpp"
#include "ccadm/text.hpp"
#include "ccadm/windowing.hpp"

namespace ccadm {

std::size_t ParamGrid::size() const {
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.values.size();
  return total;
}

std::vector<ParamList> ParamGrid::enumerate() const {
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError(fmt::format("grid axis '{}' has no values", axis.name));
  }
  std::vector<ParamList> out;
  out.reserve(size());
  std::vector<std::size_t> counter(axes.size(), 0);
  while (true) {
    ParamList point;
    for (std::size_t a = 0; a < axes.size(); ++a) point.emplace_back(axes[a].name, axes[a].values[counter[a]]);
    out.push_back(std::move(point));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++counter[a] < axes[a].values.size()) break;
      counter[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

GridResult grid_search(const LearnerConfig& base, const ParamGrid& grid, const AssembledTable& table,
                       const GridSearchOptions& options) {
  if (!lower_is_better(grid.objective))
    throw MeasureError(fmt::format("grid objective must be an error measure, not {}", measure_name(grid.objective)));
  ParamGrid full = grid;
  if (options.windows) {
    GridAxis axis{"window", {}};
    for (auto w : *options.windows) axis.values.push_back(std::to_string(w));
    full.axes.insert(full.axes.begin(), std::move(axis));
  }
  std::size_t window_axes = 0;
  for (const auto& axis : full.axes) window_axes += axis.name == "window";
  if (window_axes > 1) throw ConfigError("grid declares the window axis twice");

  const auto points = full.enumerate();
  std::vector<GridTrial> trials(points.size());
  std::vector<LearnerConfig> configs;
  configs.reserve(points.size());
  for (const auto& point : points) {
    LearnerConfig cfg = base;
    std::size_t w = options.window;
    for (const auto& [name, value] : point) {
      if (name == "window") {
        auto parsed = text::parse_integer(value);
        if (!parsed || *parsed < 1) throw ConfigError(fmt::format("bad window value '{}'", value));
        w = static_cast<std::size_t>(*parsed);
      } else {
        cfg.set(name, value);
      }
    }
    trials[configs.size()].assignment = point;
    trials[configs.size()].window = w;
    configs.push_back(std::move(cfg));
  }

  auto errors = parallel_for(points.size(), options.workers, [&](std::size_t i) {
    auto result = run_pipeline(table, configs[i], trials[i].window, options.split, options.seed, options.eps_re);
    trials[i].report = result.report;
    trials[i].objective = *result.report.value(grid.objective);
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const SeriesTooShortError& e) {
      throw SeriesTooShortError(e.needed(), e.have(),
                                fmt::format("grid trial {} ({}): {}", i, format_params(points[i]), e.what()));
    }
  }

  GridResult result;
  result.objective = grid.objective;
  result.trials = std::move(trials);
  for (std::size_t i = 1; i < result.trials.size(); ++i) {
    if (result.trials[i].objective < result.trials[result.best].objective) result.best = i;
  }
  return result;
}

namespace grid_presets {

namespace {

template <typename T>
std::vector<std::string> as_text(std::initializer_list<T> values) {
  std::vector<std::string> out;
  for (const auto& v : values) {
    if constexpr (std::is_same_v<T, double>) {
      out.push_back(text::format_real(v));
    } else {
      out.push_back(fmt::format("{}", v));
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> windows() { return {1, 3, 5, 7, 10, 20, 30}; }

ParamGrid knn() { return {{{"k", as_text({1, 2, 3, 4, 5, 7, 10, 15, 20})}}, Measure::RE}; }

ParamGrid decision_tree() {
  return {{{"max_depth", as_text({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20})}}, Measure::RE};
}

ParamGrid deep_learning() {
  return {{{"activation", {"Tanh", "Rectifier", "ExpRectifier"}}, {"epochs", as_text({2, 4, 6, 8, 10, 15})}},
          Measure::RE};
}

ParamGrid gradient_boosted_trees() {
  return {{{"n_trees", as_text({10, 20, 30, 40, 50, 60, 70, 80, 90, 100})},
           {"max_depth", as_text({3, 5, 7, 15})},
           {"learning_rate", as_text({0.01, 0.02, 0.03, 0.1})},
           {"n_bins", as_text({10, 20, 30})}},
          Measure::RE};
}

ParamGrid by_name(const std::string& name) {
  if (text::iequals(name, "knn")) return knn();
  if (text::iequals(name, "dt")) return decision_tree();
  if (text::iequals(name, "dl")) return deep_learning();
  if (text::iequals(name, "gbt")) return gradient_boosted_trees();
  throw ConfigError(fmt::format("unknown preset grid '{}' (expected knn, dt, dl or gbt)", name));
}

}  // namespace grid_presets

}  // namespace ccadm
