#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccadm/date.hpp"

namespace ccadm {

/// One dated observation. `values` is aligned with the owning dataset's
/// attribute names; nullopt marks a missing cell.
struct DatasetRow {
  Date date;
  std::vector<std::optional<double>> values;

  friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

/// A single location's dated attribute table.
///
/// Invariants (checked on construction): at least two rows, dates strictly
/// increasing, every row as wide as the attribute list, attribute names
/// unique and non-empty.
class SourceDataset {
 public:
  SourceDataset(std::string source_id, std::vector<std::string> attribute_names,
                std::vector<DatasetRow> rows);

  const std::string& source_id() const noexcept { return source_id_; }
  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
  const std::vector<DatasetRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  std::optional<std::size_t> attribute_index(const std::string& name) const;
  bool has_attribute(const std::string& name) const { return attribute_index(name).has_value(); }

  /// Row index for `date`, or nullopt.
  std::optional<std::size_t> find(const Date& date) const;

  friend bool operator==(const SourceDataset&, const SourceDataset&) = default;

 private:
  std::string source_id_;
  std::vector<std::string> attribute_names_;
  std::vector<DatasetRow> rows_;
};

struct LoadOptions {
  char delimiter = ',';
};

/// Reads a delimited table: header row whose first column is the date,
/// remaining columns attribute names. Empty cells and "?" are missing.
/// Rows are returned sorted by date.
SourceDataset read_dataset(std::istream& in, const std::string& source_id,
                           const LoadOptions& options = {});

SourceDataset load_dataset(const std::filesystem::path& path, const std::string& source_id,
                           const LoadOptions& options = {});

/// Writes the table back in the format `read_dataset` accepts. Missing
/// values are written as empty cells.
void write_dataset(std::ostream& out, const SourceDataset& dataset, char delimiter = ',');

struct ManifestEntry {
  std::string source_id;
  std::filesystem::path path;
  std::size_t row_count = 0;
  Date first_date;
  Date last_date;
  std::vector<std::string> attributes;
};

/// Immutable-after-load collection of datasets keyed by source id.
class DataRepository {
 public:
  /// Throws ConfigError when the source id is already present.
  void add(SourceDataset dataset, std::filesystem::path origin = {});

  bool contains(const std::string& source_id) const;
  /// Throws UnresolvedRefError for an unknown id.
  const SourceDataset& get(const std::string& source_id) const;

  std::vector<std::string> source_ids() const;
  const std::vector<ManifestEntry>& manifest() const noexcept { return manifest_; }
  std::size_t size() const noexcept { return datasets_.size(); }
  bool empty() const noexcept { return datasets_.empty(); }

 private:
  std::map<std::string, SourceDataset> datasets_;
  std::vector<ManifestEntry> manifest_;
};

/// Files in `dir` carrying `extension`, sorted by name. Source id of each
/// file is its stem.
std::vector<std::filesystem::path> list_dataset_files(const std::filesystem::path& dir,
                                                      const std::string& extension = ".csv");

/// Loads every dataset file in `dir`; the first failing file aborts.
DataRepository load_repository(const std::filesystem::path& dir, const LoadOptions& options = {},
                               const std::string& extension = ".csv");

/// A dataset restricted to some attributes (all of them when empty).
struct DatasetSelection {
  const SourceDataset* dataset = nullptr;
  std::vector<std::string> attributes;
};

/// Sorted dates present in every dataset with no missing value in any
/// attribute. Throws NoOverlapError (listing each dataset's date span) when
/// the result would be empty.
std::vector<Date> common_date_index(std::span<const SourceDataset* const> datasets);

/// As above, but completeness is only required for the selected attributes.
std::vector<Date> common_date_index(std::span<const DatasetSelection> selections);

}  // namespace ccadm
