#include "ccadm/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ccadm/errors.hpp"
#include "ccadm/grid.hpp"
#include "ccadm/metrics.hpp"
#include "ccadm/reporting.hpp"
#include "ccadm/text.hpp"
#include "ccadm/windowing.hpp"

namespace ccadm::cli {

namespace fs = std::filesystem;

namespace {

template <typename F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    fmt::print(log, "error: {}: {}\n", e.kind(), e.what());
  } catch (const std::exception& e) {
    fmt::print(log, "error: {}\n", e.what());
  }
  return kExitConfig;
}

// Writes through a temporary so a failed command never leaves half a file.
void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << content;
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
  }
  fs::rename(tmp, path);
}

void clear_results(const fs::path& dir) {
  for (const char* entry : {"index.csv", "config.json", "grid.csv", "cells", "reports"}) fs::remove_all(dir / entry);
}

std::string metric_or_blank(const std::optional<double>& v) { return v ? text::format_real(*v) : "undefined"; }

}  // namespace

int cmd_ingest(const fs::path& data_dir, const fs::path& out_manifest, const LoadOptions& options,
               const std::string& extension, std::ostream& log) {
  return guarded(log, [&] {
    const auto files = list_dataset_files(data_dir, extension);
    if (files.empty()) {
      fmt::print(log, "error: no datasets found in '{}'\n", data_dir.string());
      return kExitConfig;
    }
    DataRepository repo;
    std::size_t failures = 0;
    for (const auto& file : files) {
      try {
        repo.add(load_dataset(file, file.stem().string(), options), file);
      } catch (const Error& e) {
        ++failures;
        fmt::print(log, "error: {}: {}: {}\n", file.filename().string(), e.kind(), e.what());
      }
    }
    if (failures > 0) {
      fmt::print(log, "{} of {} dataset files failed to load\n", failures, files.size());
      return kExitConfig;
    }
    std::ostringstream out;
    out << "source_id,file,rows,first_date,last_date,attributes\n";
    for (const auto& e : repo.manifest()) {
      out << e.source_id << ',' << text::sanitize_field(e.path.filename().string()) << ',' << e.row_count << ','
          << e.first_date.iso() << ',' << e.last_date.iso() << ',' << text::join(e.attributes, ";") << '\n';
    }
    write_file(out_manifest, out.str());
    fmt::print(log, "loaded {} datasets; manifest written to {}\n", repo.size(), out_manifest.string());
    return kExitOk;
  });
}

int cmd_correlate(const fs::path& data_dir, const std::string& attribute, const fs::path& out_file,
                  const LoadOptions& options, const std::string& extension, std::ostream& log) {
  return guarded(log, [&] {
    const auto repo = load_repository(data_dir, options, extension);
    if (repo.empty()) throw ConfigError(fmt::format("no datasets found in '{}'", data_dir.string()));
    std::vector<std::string> ids;
    for (const auto& id : repo.source_ids()) {
      if (repo.get(id).has_attribute(attribute)) ids.push_back(id);
    }
    if (ids.size() < 2)
      throw ConfigError(
          fmt::format("attribute '{}' is present in {} source(s); correlation needs at least 2", attribute, ids.size()));
    const auto m = pearson_matrix(repo, attribute, ids);
    std::ostringstream out;
    out << "source," << text::join(ids, ",") << '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out << ids[i];
      for (double v : m.entries[i]) out << ',' << text::format_real(v);
      out << '\n';
    }
    out << "\nn_common," << text::join(ids, ",") << '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out << ids[i];
      for (auto n : m.n_common[i]) out << ',' << n;
      out << '\n';
    }
    write_file(out_file, out.str());
    fmt::print(log, "{}x{} correlation matrix of '{}' written to {}\n", ids.size(), ids.size(), attribute,
               out_file.string());
    return kExitOk;
  });
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir, const Overrides& overrides, std::ostream& log) {
  return guarded(log, [&] {
    auto cfg = load_experiment(config_path);
    apply_overrides(cfg, overrides);
    const auto repo = load_data(cfg);
    fmt::print(log, "running {} scenarios x {} algorithms (window {}, split {}, seed {}, {} worker(s))\n",
               cfg.run.suite.scenarios.size(), cfg.run.algorithms.size(), cfg.run.window, cfg.run.split, cfg.run.seed,
               cfg.run.workers);
    auto progress = [&](const EvaluationRecord& r, std::size_t done, std::size_t total) {
      const auto ms = std::chrono::duration<double, std::milli>(r.duration).count();
      if (r.ok()) {
        fmt::print(log, "[{}/{}] {} {}: RE {:.6f} RMSE {:.6f} ({:.0f} ms)\n", done, total, r.scenario_id, r.algorithm,
                   r.metrics.re.value, r.metrics.rmse.value, ms);
      } else {
        fmt::print(log, "[{}/{}] {} {}: FAILED {}: {}\n", done, total, r.scenario_id, r.algorithm, r.failure->kind,
                   r.failure->message);
      }
    };
    auto records = run_suite(repo, cfg.run, progress);
    const ResultStore store(std::move(records), snapshot_json(cfg));
    clear_results(out_dir);
    write_results(store, out_dir);
    write_reports(store, out_dir, ReportKind::All);

    std::vector<const EvaluationRecord*> failed;
    for (const auto& r : store.records()) {
      if (!r.ok()) failed.push_back(&r);
    }
    if (!failed.empty()) {
      fmt::print(log, "{} of {} cells failed:\n", failed.size(), store.records().size());
      for (const auto* r : failed)
        fmt::print(log, "  {} {}: {}: {}\n", r->scenario_id, r->algorithm, r->failure->kind, r->failure->message);
      return kExitPartial;
    }
    fmt::print(log, "results written to {}\n", out_dir.string());
    return kExitOk;
  });
}

int cmd_optimize(const fs::path& config_path, const fs::path& out_dir, const Overrides& overrides,
                 std::ostream& log) {
  return guarded(log, [&] {
    auto cfg = load_experiment(config_path);
    apply_overrides(cfg, overrides);
    if (!cfg.optimize) throw ConfigError("configuration has no 'optimize' section");
    const auto& opt = *cfg.optimize;
    const auto repo = load_data(cfg);
    const auto* spec = cfg.run.suite.find(opt.scenario_id);
    if (!spec) throw ConfigError(fmt::format("optimize: no scenario '{}' in the suite", opt.scenario_id));
    spec->resolve(repo);

    std::optional<LearnerConfig> base;
    for (const auto& learner : cfg.run.algorithms) {
      if (learner.name() == opt.algorithm) base = learner;
    }
    if (!base) base = LearnerConfig::defaults(parse_algorithm(opt.algorithm));

    GridSearchOptions options;
    options.windows = opt.windows;
    options.window = cfg.run.window;
    options.split = cfg.run.split;
    options.seed = cell_seed(cfg.run.seed, spec->scenario_id, base->name());
    options.eps_re = cfg.run.eps_re;
    options.workers = cfg.run.workers;

    const auto table = assemble(repo, *spec);
    fmt::print(log, "optimizing {} on {}: {} trials\n", base->name(), spec->scenario_id,
               opt.grid.size() * (opt.windows ? opt.windows->size() : 1));
    const auto result = grid_search(*base, opt.grid, table, options);

    std::ostringstream out;
    out << "trial,window";
    for (const auto& axis : opt.grid.axes) {
      if (axis.name != "window") out << ',' << axis.name;
    }
    out << ",ae,re,rmse,spearman,objective,best\n";
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
      const auto& t = result.trials[i];
      out << i << ',' << t.window;
      for (const auto& [name, value] : t.assignment) {
        if (name != "window") out << ',' << value;
      }
      out << ',' << text::format_real(t.report.ae.value) << ',' << text::format_real(t.report.re.value) << ','
          << text::format_real(t.report.rmse.value) << ',' << metric_or_blank(t.report.spearman) << ','
          << text::format_real(t.objective) << ',' << (i == result.best ? 1 : 0) << '\n';
    }
    fs::create_directories(out_dir);
    fs::remove(out_dir / "grid.csv");
    write_file(out_dir / "grid.csv", out.str());
    write_file(out_dir / "config.json", snapshot_json(cfg));
    const auto& best = result.best_trial();
    fmt::print(log, "best: window={} {} with {} {}\n", best.window, format_params(best.assignment),
               measure_name(result.objective), text::format_real(best.objective));
    return kExitOk;
  });
}

int cmd_report(const fs::path& results_dir, const std::string& kind, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const auto report_kind = parse_report_kind(kind);
    const auto store = load_results(results_dir);
    for (const auto& path : write_reports(store, results_dir, report_kind)) out << path.string() << '\n';
    return kExitOk;
  });
}

int cmd_presets(const PresetRequest& request, const fs::path& out_file, std::ostream& log) {
  return guarded(log, [&] {
    const auto suite = generate_presets(request);
    std::ostringstream out;
    write_suite(out, suite);
    write_file(out_file, out.str());
    fmt::print(log, "{} scenarios written to {}\n", suite.scenarios.size(), out_file.string());
    return kExitOk;
  });
}

}  // namespace ccadm::cli
