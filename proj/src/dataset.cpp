#include "ccadm/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "ccadm/errors.hpp"
#include "ccadm/text.hpp"

namespace ccadm {

namespace fs = std::filesystem;

SourceDataset::SourceDataset(std::string source_id, std::vector<std::string> attribute_names,
                             std::vector<DatasetRow> rows)
    : source_id_(std::move(source_id)),
      attribute_names_(std::move(attribute_names)),
      rows_(std::move(rows)) {
  if (source_id_.empty()) throw ParseError("dataset source id must not be empty");
  std::set<std::string> seen;
  for (const auto& name : attribute_names_) {
    if (name.empty()) throw ParseError(fmt::format("{}: empty attribute name", source_id_));
    if (!seen.insert(name).second)
      throw ParseError(fmt::format("{}: duplicate attribute '{}'", source_id_, name));
  }
  if (rows_.size() < 2)
    throw ParseError(fmt::format("{}: dataset needs at least 2 rows, has {}", source_id_, rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].values.size() != attribute_names_.size())
      throw ParseError(fmt::format("{}: row {} has {} values, expected {}", source_id_, i + 1,
                                   rows_[i].values.size(), attribute_names_.size()));
    if (i > 0 && !(rows_[i - 1].date < rows_[i].date))
      throw ParseError(fmt::format("{}: dates not strictly increasing at row {}", source_id_, i + 1));
  }
}

std::optional<std::size_t> SourceDataset::attribute_index(const std::string& name) const {
  auto it = std::find(attribute_names_.begin(), attribute_names_.end(), name);
  if (it == attribute_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - attribute_names_.begin());
}

std::optional<std::size_t> SourceDataset::find(const Date& date) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), date,
                             [](const DatasetRow& r, const Date& d) { return r.date < d; });
  if (it == rows_.end() || it->date != date) return std::nullopt;
  return static_cast<std::size_t>(it - rows_.begin());
}

SourceDataset read_dataset(std::istream& in, const std::string& source_id, const LoadOptions& options) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!text::trim(line).empty()) {
      header = text::split(line, options.delimiter);
      break;
    }
  }
  if (header.empty()) throw ParseError(fmt::format("{}: missing header row", source_id));
  if (header.size() < 2) throw ParseError(fmt::format("{}: header names no attribute columns", source_id));
  std::vector<std::string> attributes(header.begin() + 1, header.end());

  struct NumberedRow {
    std::size_t file_row;
    DatasetRow row;
  };
  std::vector<NumberedRow> rows;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    ++data_row;
    auto cells = text::split(line, options.delimiter);
    if (cells.size() != header.size())
      throw ParseError(fmt::format("{}: data row {} has {} cells, header has {}", source_id, data_row,
                                   cells.size(), header.size()));
    auto date = Date::parse(cells[0]);
    if (!date)
      throw DateFormatError(data_row, fmt::format("{}: data row {}: cannot parse date '{}' (expected YYYY-MM-DD)",
                                                  source_id, data_row, cells[0]));
    DatasetRow row{*date, {}};
    row.values.reserve(attributes.size());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      if (cell.empty() || cell == "?") {
        row.values.emplace_back(std::nullopt);
        continue;
      }
      auto v = text::parse_real(cell);
      if (!v)
        throw CellParseError(data_row, attributes[c - 1],
                             fmt::format("{}: data row {}, column '{}': '{}' is not a finite number",
                                         source_id, data_row, attributes[c - 1], cell));
      row.values.emplace_back(*v);
    }
    rows.push_back({data_row, std::move(row)});
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const NumberedRow& a, const NumberedRow& b) { return a.row.date < b.row.date; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].row.date == rows[i - 1].row.date) {
      auto row = std::max(rows[i].file_row, rows[i - 1].file_row);
      throw DuplicateDateError(row, fmt::format("{}: data row {}: duplicate date {}", source_id, row,
                                                rows[i].row.date.iso()));
    }
  }

  std::vector<DatasetRow> sorted;
  sorted.reserve(rows.size());
  for (auto& r : rows) sorted.push_back(std::move(r.row));
  return SourceDataset(source_id, std::move(attributes), std::move(sorted));
}

SourceDataset load_dataset(const fs::path& path, const std::string& source_id, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open dataset file '{}'", path.string()));
  return read_dataset(in, source_id, options);
}

void write_dataset(std::ostream& out, const SourceDataset& dataset, char delimiter) {
  out << "date";
  for (const auto& name : dataset.attribute_names()) out << delimiter << name;
  out << '\n';
  for (const auto& row : dataset.rows()) {
    out << row.date.iso();
    for (const auto& v : row.values) {
      out << delimiter;
      if (v) out << text::format_real(*v);
    }
    out << '\n';
  }
}

void DataRepository::add(SourceDataset dataset, fs::path origin) {
  const std::string id = dataset.source_id();
  if (datasets_.count(id)) throw ConfigError(fmt::format("duplicate source id '{}'", id));
  ManifestEntry entry{id, std::move(origin), dataset.size(), dataset.rows().front().date,
                      dataset.rows().back().date, dataset.attribute_names()};
  datasets_.emplace(id, std::move(dataset));
  manifest_.push_back(std::move(entry));
}

bool DataRepository::contains(const std::string& source_id) const { return datasets_.count(source_id) > 0; }

const SourceDataset& DataRepository::get(const std::string& source_id) const {
  auto it = datasets_.find(source_id);
  if (it == datasets_.end()) throw UnresolvedRefError(fmt::format("unknown source '{}'", source_id));
  return it->second;
}

std::vector<std::string> DataRepository::source_ids() const {
  std::vector<std::string> ids;
  ids.reserve(datasets_.size());
  for (const auto& [id, _] : datasets_) ids.push_back(id);
  return ids;
}

std::vector<fs::path> list_dataset_files(const fs::path& dir, const std::string& extension) {
  if (!fs::is_directory(dir)) throw IoError(fmt::format("'{}' is not a directory", dir.string()));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

DataRepository load_repository(const fs::path& dir, const LoadOptions& options, const std::string& extension) {
  DataRepository repo;
  for (const auto& file : list_dataset_files(dir, extension)) {
    repo.add(load_dataset(file, file.stem().string(), options), file);
  }
  return repo;
}

namespace {

std::vector<std::size_t> resolve_columns(const DatasetSelection& sel) {
  std::vector<std::size_t> cols;
  if (sel.attributes.empty()) {
    cols.resize(sel.dataset->attribute_names().size());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return cols;
  }
  for (const auto& name : sel.attributes) {
    auto idx = sel.dataset->attribute_index(name);
    if (!idx)
      throw UnresolvedRefError(
          fmt::format("source '{}' has no attribute '{}'", sel.dataset->source_id(), name));
    cols.push_back(*idx);
  }
  return cols;
}

std::vector<Date> complete_dates(const DatasetSelection& sel) {
  auto cols = resolve_columns(sel);
  std::vector<Date> out;
  for (const auto& row : sel.dataset->rows()) {
    bool complete = std::all_of(cols.begin(), cols.end(), [&](std::size_t c) { return row.values[c].has_value(); });
    if (complete) out.push_back(row.date);
  }
  return out;
}

}  // namespace

std::vector<Date> common_date_index(std::span<const DatasetSelection> selections) {
  if (selections.empty()) throw ConfigError("common_date_index needs at least one dataset");
  std::vector<Date> common = complete_dates(selections.front());
  for (std::size_t i = 1; i < selections.size(); ++i) {
    auto next = complete_dates(selections[i]);
    std::vector<Date> merged;
    std::set_intersection(common.begin(), common.end(), next.begin(), next.end(), std::back_inserter(merged));
    common = std::move(merged);
  }
  if (common.empty()) {
    std::string spans;
    for (const auto& sel : selections) {
      const auto& rows = sel.dataset->rows();
      spans += fmt::format("{}{} [{} .. {}]", spans.empty() ? "" : ", ", sel.dataset->source_id(),
                           rows.front().date.iso(), rows.back().date.iso());
    }
    throw NoOverlapError("no date is complete in every selected dataset; spans: " + spans);
  }
  return common;
}

std::vector<Date> common_date_index(std::span<const SourceDataset* const> datasets) {
  std::vector<DatasetSelection> sel;
  sel.reserve(datasets.size());
  for (const auto* ds : datasets) sel.push_back({ds, {}});
  return common_date_index(std::span<const DatasetSelection>(sel));
}

}  // namespace ccadm
