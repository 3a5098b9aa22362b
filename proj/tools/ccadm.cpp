#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccadm/commands.hpp"

namespace {

char delimiter_flag(const std::string& s) {
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) throw CLI::ValidationError("--delimiter", "must be a single character or 'tab'");
  return s[0];
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ccadm;
  CLI::App app{"Scenario-based context-aware and collaborative time-series prediction"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string data_dir;
  std::string delimiter = ",";
  std::string extension = ".csv";

  auto* ingest = app.add_subcommand("ingest", "Load a data directory and write its manifest");
  std::string manifest = "manifest.csv";
  ingest->add_option("data_dir", data_dir, "Directory with one file per source")->required();
  ingest->add_option("-o,--out", manifest, "Manifest file to write");
  ingest->add_option("--delimiter", delimiter, "Field delimiter");
  ingest->add_option("--extension", extension, "Dataset file extension");

  auto* correlate = app.add_subcommand("correlate", "Pearson matrix of one attribute across sources");
  std::string attribute;
  std::string corr_out = "correlation.csv";
  correlate->add_option("data_dir", data_dir, "Directory with one file per source")->required();
  correlate->add_option("attribute", attribute, "Attribute to correlate")->required();
  correlate->add_option("-o,--out", corr_out, "Report file to write");
  correlate->add_option("--delimiter", delimiter, "Field delimiter");
  correlate->add_option("--extension", extension, "Dataset file extension");

  std::string config_path;
  std::string out_dir;
  Overrides overrides;
  std::size_t window = 0;
  double split = 0.0;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", out_dir, "Output directory")->required();
    cmd->add_option("--window", window, "Override the window size")->check(CLI::PositiveNumber);
    cmd->add_option("--split", split, "Override the training fraction");
    cmd->add_option("--seed", seed, "Override the seed");
    cmd->add_option("--workers", workers, "Concurrent cells")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "Evaluate every scenario x algorithm cell");
  add_run_flags(run);
  auto* optimize = app.add_subcommand("optimize", "Grid search from the configuration's optimize section");
  add_run_flags(optimize);

  auto* report = app.add_subcommand("report", "Regenerate reports from a results directory");
  std::string results_dir;
  std::string kind = "all";
  report->add_option("results_dir", results_dir, "Directory written by run")->required();
  report->add_option("-k,--kind", kind, "summary, spearman, dispersion, series or all");

  auto* presets = app.add_subcommand("presets", "Write the six standard scenarios for one location");
  PresetRequest req;
  std::string presets_out;
  presets->add_option("--main", req.main, "Main source id")->required();
  presets->add_option("--target", req.target_attribute, "Target attribute")->required();
  presets->add_option("--context", req.context_attribute, "Context attribute")->required();
  presets->add_option("--neighbors", req.neighbors, "Collaborative source ids, most correlated first")
      ->required()
      ->delimiter(',');
  presets->add_option("--neighbor-attribute", req.neighbor_attribute, "Neighbor attribute (default: target)");
  presets->add_option("-o,--out", presets_out, "Scenario file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  auto load_options = [&] {
    LoadOptions opts;
    opts.delimiter = delimiter_flag(delimiter);
    return opts;
  };
  try {
    if (run->parsed() || optimize->parsed()) {
      auto* cmd = run->parsed() ? run : optimize;
      if (cmd->count("--window")) overrides.window = window;
      if (cmd->count("--split")) overrides.split = split;
      if (cmd->count("--seed")) overrides.seed = seed;
      if (cmd->count("--workers")) overrides.workers = workers;
      return run->parsed() ? cli::cmd_run(config_path, out_dir, overrides, std::cerr)
                           : cli::cmd_optimize(config_path, out_dir, overrides, std::cerr);
    }
    if (ingest->parsed()) return cli::cmd_ingest(data_dir, manifest, load_options(), extension, std::cerr);
    if (correlate->parsed())
      return cli::cmd_correlate(data_dir, attribute, corr_out, load_options(), extension, std::cerr);
    if (report->parsed()) return cli::cmd_report(results_dir, kind, std::cout, std::cerr);
    if (presets->parsed()) {
      if (req.neighbor_attribute.empty()) req.neighbor_attribute = req.target_attribute;
      return cli::cmd_presets(req, presets_out, std::cerr);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  return cli::kExitConfig;
}
