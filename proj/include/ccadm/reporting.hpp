#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccadm/metrics.hpp"
#include "ccadm/runner.hpp"

namespace ccadm {

struct CellKey {
  std::string scenario_id;
  std::string location;
  std::string algorithm;

  /// `<scenario>__<location>__<algorithm>` with unsafe filename characters
  /// replaced by '_'.
  std::string file_stem() const;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

CellKey key_of(const EvaluationRecord& record);

/// The records of one run, indexed by cell. Immutable once built.
class ResultStore {
 public:
  /// Throws ConfigError on duplicate cell keys.
  explicit ResultStore(std::vector<EvaluationRecord> records, std::string config_snapshot = {});

  const std::vector<EvaluationRecord>& records() const noexcept { return records_; }
  const std::string& config_snapshot() const noexcept { return config_snapshot_; }

  const EvaluationRecord* find(const CellKey& key) const;
  /// Throws CellNotFoundError.
  const EvaluationRecord& at(const CellKey& key) const;

 private:
  std::vector<EvaluationRecord> records_;
  std::map<CellKey, std::size_t> index_;
  std::string config_snapshot_;
};

enum class GroupBy { Algorithm, Location, Scenario, Label };

std::string_view group_by_name(GroupBy g);
GroupBy parse_group_by(std::string_view name);

struct RankingRow {
  std::string key;
  /// Mean over members with a defined value; nullopt when none has one.
  std::optional<double> value;
  std::size_t members = 0;
  std::size_t rank = 0;
};

struct RankingTable {
  GroupBy group_by = GroupBy::Algorithm;
  Measure measure = Measure::RE;
  std::vector<RankingRow> rows;
};

/// Mean of `measure` over successful cells per group, ranked ascending for
/// error measures and descending for Spearman. Ranks are dense (equal means
/// share a rank); groups without any defined value come last.
RankingTable summarize(const ResultStore& store, GroupBy group_by, Measure measure);

struct SpearmanCell {
  std::optional<double> rho;
  std::size_t cells = 0;
  bool best = false;
};

/// Rows are scenario labels, columns algorithm names, both in first-seen
/// order. Each entry averages the per-cell coefficient (recomputed from the
/// stored predictions) over locations; cells whose coefficient is undefined
/// are left out. The maximal entries of each column are flagged.
struct SpearmanTable {
  std::vector<std::string> scenarios;
  std::vector<std::string> algorithms;
  std::vector<std::vector<SpearmanCell>> cells;
};

SpearmanTable spearman_table(const ResultStore& store);

/// Columns date, actual, predicted, deviation (= predicted - actual).
/// Throws CellNotFoundError for an unknown or failed cell.
void emit_series(const ResultStore& store, const CellKey& key, std::ostream& out);

/// Pearson correlation between each successful cell's RMSE and the standard
/// deviation of its squared-error terms.
double error_dispersion_correlation(const ResultStore& store);

/// Writes `index.csv`, `cells/<stem>.csv` per successful cell, and
/// `config.json` when the store carries a snapshot. Output is a pure function
/// of the store.
void write_results(const ResultStore& store, const std::filesystem::path& dir);

/// Reads a directory written by `write_results`.
ResultStore load_results(const std::filesystem::path& dir);

enum class ReportKind { Summary, Spearman, Dispersion, Series, All };

ReportKind parse_report_kind(std::string_view name);

/// Writes the requested views under `<dir>/reports`; returns the files
/// written, in order.
std::vector<std::filesystem::path> write_reports(const ResultStore& store, const std::filesystem::path& dir,
                                                 ReportKind kind);

void write_ranking(std::ostream& out, const RankingTable& table);
void write_spearman(std::ostream& out, const SpearmanTable& table);

}  // namespace ccadm
