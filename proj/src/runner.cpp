#include "ccadm/runner.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>

#include <fmt/format.h>

#include "ccadm/dataset.hpp"
#include "ccadm/errors.hpp"
#include "ccadm/parallel.hpp"
#include "ccadm/pipeline.hpp"
#include "ccadm/rng.hpp"
#include "ccadm/windowing.hpp"

namespace ccadm {

RunConfig RunConfig::from_suite(ScenarioSuite suite) {
  RunConfig cfg;
  cfg.window = suite.defaults.window;
  cfg.split = suite.defaults.split;
  for (const auto& name : suite.defaults.learners) {
    cfg.algorithms.push_back(LearnerConfig::defaults(parse_algorithm(name)));
  }
  cfg.suite = std::move(suite);
  return cfg;
}

void RunConfig::validate() const {
  suite.check();
  if (algorithms.empty()) throw ConfigError("run needs at least one algorithm");
  std::set<std::string> names;
  for (const auto& a : algorithms) {
    a.validate();
    if (a.name().empty()) throw ConfigError("algorithm name must not be empty");
    if (!names.insert(a.name()).second) throw ConfigError(fmt::format("duplicate algorithm name '{}'", a.name()));
  }
  if (window < 1) throw ConfigError("window must be at least 1");
  if (!(split > 0.0 && split < 1.0)) throw ConfigError("split must lie in (0, 1)");
  if (!(eps_re > 0.0)) throw ConfigError("eps_re must be positive");
  if (workers < 1) throw ConfigError("workers must be at least 1");
}

std::uint64_t cell_seed(std::uint64_t seed, const std::string& scenario_id, const std::string& algorithm) {
  return Fingerprint{}.add(seed).add(scenario_id).add(algorithm).value();
}

namespace {

EvaluationRecord evaluate_cell(const DataRepository& repo, const RunConfig& cfg, const ScenarioSpec& spec,
                               const LearnerConfig& learner) {
  EvaluationRecord rec;
  rec.scenario_id = spec.scenario_id;
  rec.label = spec.label;
  rec.location = spec.location();
  rec.algorithm = learner.name();
  rec.params = learner.params();
  rec.seed = cell_seed(cfg.seed, spec.scenario_id, learner.name());
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto table = assemble(repo, spec);
    auto result = run_pipeline(table, learner, cfg.window, cfg.split, rec.seed, cfg.eps_re);
    rec.metrics = result.report;
    rec.train_size = result.train_size;
    rec.predictions.reserve(result.dates.size());
    for (std::size_t i = 0; i < result.dates.size(); ++i)
      rec.predictions.push_back({result.dates[i], result.actual[i], result.predicted[i]});
  } catch (const Error& e) {
    rec.failure = CellFailure{e.kind(), e.what()};
  } catch (const std::exception& e) {
    rec.failure = CellFailure{"InternalError", e.what()};
  }
  rec.duration = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return rec;
}

}  // namespace

std::vector<EvaluationRecord> run_suite(const DataRepository& repo, const RunConfig& config,
                                        const ProgressFn& progress) {
  config.validate();
  const std::size_t n_alg = config.algorithms.size();
  const std::size_t total = config.suite.scenarios.size() * n_alg;
  std::vector<EvaluationRecord> records(total);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(total, config.workers, [&](std::size_t i) {
    records[i] = evaluate_cell(repo, config, config.suite.scenarios[i / n_alg], config.algorithms[i % n_alg]);
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(records[i], ++done, total);
    }
  });
  const auto failed = std::count_if(records.begin(), records.end(), [](const EvaluationRecord& r) { return !r.ok(); });
  if (static_cast<std::size_t>(failed) == total) {
    const auto& first = records.front();
    throw SuiteFailedError(fmt::format("all {} cells failed; first: {} in {}/{}: {}", total, first.failure->kind,
                                       first.scenario_id, first.algorithm, first.failure->message));
  }
  return records;
}

EvaluationRecord rerun_cell(const DataRepository& repo, const RunConfig& config, const std::string& scenario_id,
                            const std::string& algorithm) {
  config.validate();
  const auto* spec = config.suite.find(scenario_id);
  if (!spec) throw CellNotFoundError(fmt::format("no scenario '{}' in the suite", scenario_id));
  for (const auto& learner : config.algorithms) {
    if (learner.name() == algorithm) return evaluate_cell(repo, config, *spec, learner);
  }
  throw CellNotFoundError(fmt::format("no algorithm named '{}' in the run", algorithm));
}

}  // namespace ccadm
