#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ccadm/dataset.hpp"
#include "ccadm/experiment.hpp"
#include "ccadm/scenario.hpp"

// Command bodies behind the `ccadm` executable. Each returns the process exit
// code, writes results only under the paths it is given and logs to `log`.
namespace ccadm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPartial = 3;

/// Loads every dataset file in `data_dir` and writes a manifest CSV
/// (source_id, file, rows, first_date, last_date, attributes). Every file is
/// tried; each failure is reported with its file name.
int cmd_ingest(const std::filesystem::path& data_dir, const std::filesystem::path& out_manifest,
               const LoadOptions& options, const std::string& extension, std::ostream& log);

/// Pearson matrix of `attribute` over every source that has it, followed by
/// the matrix of pairwise common-date counts.
int cmd_correlate(const std::filesystem::path& data_dir, const std::string& attribute,
                  const std::filesystem::path& out_file, const LoadOptions& options, const std::string& extension,
                  std::ostream& log);

/// Runs the configured suite into `out_dir`: index, cell files, reports and
/// the config snapshot. Exit 3 when some cells failed.
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            const Overrides& overrides, std::ostream& log);

/// Runs the configuration's `optimize` section and writes `grid.csv`.
int cmd_optimize(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 const Overrides& overrides, std::ostream& log);

/// Regenerates report files from a results directory; prints their paths.
int cmd_report(const std::filesystem::path& results_dir, const std::string& kind, std::ostream& out,
               std::ostream& log);

/// Writes the six preset scenarios for one location as a scenario file.
int cmd_presets(const PresetRequest& request, const std::filesystem::path& out_file, std::ostream& log);

}  // namespace ccadm::cli
