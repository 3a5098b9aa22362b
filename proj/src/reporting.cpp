#include "ccadm/reporting.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ccadm/errors.hpp"
#include "ccadm/text.hpp"

namespace ccadm {

namespace fs = std::filesystem;

namespace {

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '.' || c == '+' || c == '(' || c == ')';
    if (!ok) c = '_';
  }
  return out;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? text::format_real(*v) : "undefined"; }

std::string stats_text(const MeasureStats& s) {
  return fmt::format("{};{};{}", text::format_real(s.value), text::format_real(s.stddev),
                     text::format_real(s.variance));
}

double require_real(std::string_view s, const std::string& where) {
  auto v = text::parse_real(s);
  if (!v) throw ParseError(fmt::format("{}: '{}' is not a number", where, s));
  return *v;
}

MeasureStats parse_stats(const std::string& s, const std::string& where) {
  auto parts = text::split(s, ';');
  if (parts.size() != 3) throw ParseError(fmt::format("{}: expected value;stddev;variance", where));
  return {require_real(parts[0], where), require_real(parts[1], where), require_real(parts[2], where)};
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

std::string CellKey::file_stem() const {
  return safe_name(scenario_id) + "__" + safe_name(location) + "__" + safe_name(algorithm);
}

CellKey key_of(const EvaluationRecord& record) { return {record.scenario_id, record.location, record.algorithm}; }

ResultStore::ResultStore(std::vector<EvaluationRecord> records, std::string config_snapshot)
    : records_(std::move(records)), config_snapshot_(std::move(config_snapshot)) {
  std::map<std::string, CellKey> stems;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto key = key_of(records_[i]);
    if (!index_.emplace(key, i).second)
      throw ConfigError(fmt::format("duplicate cell {}/{}/{}", key.scenario_id, key.location, key.algorithm));
    if (!stems.emplace(key.file_stem(), key).second)
      throw ConfigError(fmt::format("cells collide on file name '{}'", key.file_stem()));
  }
}

const EvaluationRecord* ResultStore::find(const CellKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const EvaluationRecord& ResultStore::at(const CellKey& key) const {
  const auto* rec = find(key);
  if (!rec)
    throw CellNotFoundError(fmt::format("no cell {}/{}/{}", key.scenario_id, key.location, key.algorithm));
  return *rec;
}

std::string_view group_by_name(GroupBy g) {
  switch (g) {
    case GroupBy::Algorithm:
      return "algorithm";
    case GroupBy::Location:
      return "location";
    case GroupBy::Scenario:
      return "scenario";
    case GroupBy::Label:
      return "label";
  }
  return {};
}

GroupBy parse_group_by(std::string_view name) {
  for (auto g : {GroupBy::Algorithm, GroupBy::Location, GroupBy::Scenario, GroupBy::Label}) {
    if (text::iequals(name, group_by_name(g))) return g;
  }
  throw ConfigError(fmt::format("unknown grouping '{}' (expected algorithm, location, scenario or label)", name));
}

RankingTable summarize(const ResultStore& store, GroupBy group_by, Measure measure) {
  if (store.records().empty()) throw ConfigError("cannot summarize an empty result store");
  auto group_key = [&](const EvaluationRecord& r) -> std::string {
    switch (group_by) {
      case GroupBy::Algorithm:
        return r.algorithm;
      case GroupBy::Location:
        return r.location;
      case GroupBy::Scenario:
        return r.scenario_id;
      case GroupBy::Label:
        return r.label.str();
    }
    return {};
  };
  std::vector<std::string> order;
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : store.records()) {
    const auto key = group_key(r);
    auto [it, inserted] = acc.emplace(key, std::pair<double, std::size_t>{0.0, 0});
    if (inserted) order.push_back(key);
    if (!r.ok()) continue;
    if (auto v = r.metrics.value(measure)) {
      it->second.first += *v;
      ++it->second.second;
    }
  }
  RankingTable table{group_by, measure, {}};
  for (const auto& key : order) {
    const auto& [sum, n] = acc[key];
    RankingRow row{key, std::nullopt, n, 0};
    if (n > 0) row.value = sum / static_cast<double>(n);
    table.rows.push_back(std::move(row));
  }
  const bool ascending = lower_is_better(measure);
  std::stable_sort(table.rows.begin(), table.rows.end(), [&](const RankingRow& a, const RankingRow& b) {
    if (a.value.has_value() != b.value.has_value()) return a.value.has_value();
    if (!a.value) return false;
    return ascending ? *a.value < *b.value : *a.value > *b.value;
  });
  std::size_t rank = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    const bool same = i > 0 && row.value.has_value() == table.rows[i - 1].value.has_value() &&
                      (!row.value || *row.value == *table.rows[i - 1].value);
    if (!same) ++rank;
    row.rank = rank;
  }
  return table;
}

SpearmanTable spearman_table(const ResultStore& store) {
  SpearmanTable table;
  auto index_of = [](std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
    v.push_back(s);
    return v.size() - 1;
  };
  struct Acc {
    double sum = 0.0;
    std::size_t defined = 0;
    std::size_t cells = 0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Acc> acc;
  for (const auto& r : store.records()) {
    const auto s = index_of(table.scenarios, r.label.str());
    const auto a = index_of(table.algorithms, r.algorithm);
    auto& cell = acc[{s, a}];
    ++cell.cells;
    if (!r.ok() || r.predictions.size() < 2) continue;
    std::vector<double> pred;
    std::vector<double> actual;
    for (const auto& p : r.predictions) {
      pred.push_back(p.predicted);
      actual.push_back(p.actual);
    }
    try {
      cell.sum += spearman_rho(pred, actual);
      ++cell.defined;
    } catch (const UndefinedCorrelationError&) {
    }
  }
  table.cells.assign(table.scenarios.size(), std::vector<SpearmanCell>(table.algorithms.size()));
  for (const auto& [pos, a] : acc) {
    auto& cell = table.cells[pos.first][pos.second];
    cell.cells = a.cells;
    if (a.defined > 0) cell.rho = a.sum / static_cast<double>(a.defined);
  }
  for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
    std::optional<double> best;
    for (std::size_t s = 0; s < table.scenarios.size(); ++s) {
      const auto& rho = table.cells[s][a].rho;
      if (rho && (!best || *rho > *best)) best = rho;
    }
    for (std::size_t s = 0; s < table.scenarios.size(); ++s) {
      auto& cell = table.cells[s][a];
      cell.best = best && cell.rho && *cell.rho == *best;
    }
  }
  return table;
}

void emit_series(const ResultStore& store, const CellKey& key, std::ostream& out) {
  const auto& rec = store.at(key);
  if (!rec.ok())
    throw CellNotFoundError(fmt::format("cell {}/{}/{} failed and has no predictions", key.scenario_id, key.location,
                                        key.algorithm));
  out << "date,actual,predicted,deviation\n";
  for (const auto& p : rec.predictions) {
    out << p.date.iso() << ',' << text::format_real(p.actual) << ',' << text::format_real(p.predicted) << ','
        << text::format_real(p.predicted - p.actual) << '\n';
  }
}

double error_dispersion_correlation(const ResultStore& store) {
  std::vector<double> rmse_values;
  std::vector<double> stddevs;
  for (const auto& r : store.records()) {
    if (!r.ok()) continue;
    rmse_values.push_back(r.metrics.rmse.value);
    stddevs.push_back(r.metrics.rmse.stddev);
  }
  if (rmse_values.size() < 2)
    throw ShapeError(fmt::format("dispersion correlation needs at least 2 successful cells, have {}", rmse_values.size()));
  return pearson(rmse_values, stddevs);
}

namespace {

void write_cell(const fs::path& path, const EvaluationRecord& r) {
  auto out = open_out(path);
  out << "# scenario_id: " << r.scenario_id << '\n';
  out << "# label: " << r.label.str() << '\n';
  out << "# location: " << r.location << '\n';
  out << "# algorithm: " << r.algorithm << '\n';
  out << "# params: " << format_params(r.params) << '\n';
  out << "# seed: " << r.seed << '\n';
  out << "# train_size: " << r.train_size << '\n';
  out << "# n_test: " << r.metrics.n_examples << '\n';
  out << "# ae: " << stats_text(r.metrics.ae) << '\n';
  out << "# re: " << stats_text(r.metrics.re) << '\n';
  out << "# re_excluded: " << r.metrics.n_excluded_re << '\n';
  out << "# rmse: " << stats_text(r.metrics.rmse) << '\n';
  out << "# spearman: " << fmt_opt(r.metrics.spearman) << '\n';
  out << "date,actual,predicted,deviation\n";
  for (const auto& p : r.predictions) {
    out << p.date.iso() << ',' << text::format_real(p.actual) << ',' << text::format_real(p.predicted) << ','
        << text::format_real(p.predicted - p.actual) << '\n';
  }
}

constexpr const char* kIndexHeader =
    "scenario_id,label,location,algorithm,status,seed,params,n_test,ae,re,rmse,spearman,error_kind,error_message,"
    "cell_file";

}  // namespace

void write_results(const ResultStore& store, const fs::path& dir) {
  fs::create_directories(dir / "cells");
  auto index = open_out(dir / "index.csv");
  index << kIndexHeader << '\n';
  for (const auto& r : store.records()) {
    const auto key = key_of(r);
    const std::string file = r.ok() ? "cells/" + key.file_stem() + ".csv" : "";
    index << text::sanitize_field(r.scenario_id) << ',' << r.label.str() << ',' << text::sanitize_field(r.location)
          << ',' << text::sanitize_field(r.algorithm) << ',' << (r.ok() ? "ok" : "failed") << ',' << r.seed << ','
          << format_params(r.params) << ',';
    if (r.ok()) {
      index << r.metrics.n_examples << ',' << text::format_real(r.metrics.ae.value) << ','
            << text::format_real(r.metrics.re.value) << ',' << text::format_real(r.metrics.rmse.value) << ','
            << fmt_opt(r.metrics.spearman) << ",,,";
    } else {
      index << ",,,,," << r.failure->kind << ',' << text::sanitize_field(r.failure->message) << ',';
    }
    index << file << '\n';
    if (r.ok()) write_cell(dir / file, r);
  }
  if (!store.config_snapshot().empty()) {
    auto cfg = open_out(dir / "config.json");
    cfg << store.config_snapshot();
  }
}

namespace {

EvaluationRecord read_cell(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open cell file '{}'", path.string()));
  std::map<std::string, std::string> meta;
  EvaluationRecord r;
  std::string line;
  bool header_seen = false;
  const std::string where = path.filename().string();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      auto colon = line.find(": ");
      if (colon == std::string::npos) throw ParseError(fmt::format("{}: malformed metadata '{}'", where, line));
      meta[line.substr(2, colon - 2)] = line.substr(colon + 2);
      continue;
    }
    if (!header_seen) {
      if (line != "date,actual,predicted,deviation") throw ParseError(fmt::format("{}: unexpected header", where));
      header_seen = true;
      continue;
    }
    auto cells = text::split(line, ',');
    if (cells.size() != 4) throw ParseError(fmt::format("{}: malformed row '{}'", where, line));
    auto date = Date::parse(cells[0]);
    if (!date) throw ParseError(fmt::format("{}: bad date '{}'", where, cells[0]));
    r.predictions.push_back({*date, require_real(cells[1], where), require_real(cells[2], where)});
  }
  auto get = [&](const std::string& k) -> const std::string& {
    auto it = meta.find(k);
    if (it == meta.end()) throw ParseError(fmt::format("{}: missing '{}'", where, k));
    return it->second;
  };
  r.scenario_id = get("scenario_id");
  r.label = ScenarioLabel::parse(get("label"));
  r.location = get("location");
  r.algorithm = get("algorithm");
  r.params = parse_params(get("params"));
  r.seed = static_cast<std::uint64_t>(std::stoull(get("seed")));
  r.train_size = static_cast<std::size_t>(std::stoull(get("train_size")));
  r.metrics.n_examples = static_cast<std::size_t>(std::stoull(get("n_test")));
  r.metrics.ae = parse_stats(get("ae"), where);
  r.metrics.re = parse_stats(get("re"), where);
  r.metrics.n_excluded_re = static_cast<std::size_t>(std::stoull(get("re_excluded")));
  r.metrics.rmse = parse_stats(get("rmse"), where);
  const auto& sp = get("spearman");
  if (sp != "undefined") r.metrics.spearman = require_real(sp, where);
  if (r.predictions.size() != r.metrics.n_examples)
    throw ParseError(fmt::format("{}: {} prediction rows but n_test {}", where, r.predictions.size(),
                                 r.metrics.n_examples));
  return r;
}

}  // namespace

ResultStore load_results(const fs::path& dir) {
  std::ifstream index(dir / "index.csv");
  if (!index) throw IoError(fmt::format("no index.csv in '{}'", dir.string()));
  std::string line;
  if (!std::getline(index, line) || line != kIndexHeader)
    throw ParseError(fmt::format("'{}' does not start with the expected header", (dir / "index.csv").string()));
  std::vector<EvaluationRecord> records;
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    auto cells = text::split(line, ',');
    if (cells.size() != 15) throw ParseError(fmt::format("index.csv: malformed row '{}'", line));
    EvaluationRecord r;
    if (cells[4] == "ok") {
      r = read_cell(dir / cells[14]);
    } else {
      r.scenario_id = cells[0];
      r.label = ScenarioLabel::parse(cells[1]);
      r.location = cells[2];
      r.algorithm = cells[3];
      r.seed = static_cast<std::uint64_t>(std::stoull(cells[5]));
      r.params = parse_params(cells[6]);
      r.failure = CellFailure{cells[12], cells[13]};
    }
    records.push_back(std::move(r));
  }
  std::string snapshot;
  if (std::ifstream cfg(dir / "config.json", std::ios::binary); cfg) {
    std::ostringstream ss;
    ss << cfg.rdbuf();
    snapshot = ss.str();
  }
  return ResultStore(std::move(records), std::move(snapshot));
}

ReportKind parse_report_kind(std::string_view name) {
  if (text::iequals(name, "summary")) return ReportKind::Summary;
  if (text::iequals(name, "spearman")) return ReportKind::Spearman;
  if (text::iequals(name, "dispersion")) return ReportKind::Dispersion;
  if (text::iequals(name, "series")) return ReportKind::Series;
  if (text::iequals(name, "all")) return ReportKind::All;
  throw ConfigError(fmt::format("unknown report kind '{}' (expected summary, spearman, dispersion, series, all)", name));
}

void write_ranking(std::ostream& out, const RankingTable& table) {
  out << "rank," << group_by_name(table.group_by) << ',' << measure_name(table.measure) << ",members\n";
  for (const auto& row : table.rows) {
    out << row.rank << ',' << text::sanitize_field(row.key) << ',' << fmt_opt(row.value) << ',' << row.members << '\n';
  }
}

void write_spearman(std::ostream& out, const SpearmanTable& table) {
  out << "scenario,algorithm,rho,best,cells\n";
  for (std::size_t s = 0; s < table.scenarios.size(); ++s) {
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
      const auto& cell = table.cells[s][a];
      out << table.scenarios[s] << ',' << text::sanitize_field(table.algorithms[a]) << ',' << fmt_opt(cell.rho) << ','
          << (cell.best ? 1 : 0) << ',' << cell.cells << '\n';
    }
  }
}

std::vector<fs::path> write_reports(const ResultStore& store, const fs::path& dir, ReportKind kind) {
  const fs::path reports = dir / "reports";
  fs::create_directories(reports);
  std::vector<fs::path> written;
  const bool all = kind == ReportKind::All;
  if (all || kind == ReportKind::Summary) {
    for (auto g : {GroupBy::Algorithm, GroupBy::Location, GroupBy::Scenario, GroupBy::Label}) {
      for (auto m : {Measure::AE, Measure::RE, Measure::RMSE, Measure::Spearman}) {
        auto path = reports / fmt::format("summary_{}_{}.csv", group_by_name(g), measure_name(m));
        auto out = open_out(path);
        write_ranking(out, summarize(store, g, m));
        written.push_back(path);
      }
    }
  }
  if (all || kind == ReportKind::Spearman) {
    auto path = reports / "spearman.csv";
    auto out = open_out(path);
    write_spearman(out, spearman_table(store));
    written.push_back(path);
  }
  if (all || kind == ReportKind::Dispersion) {
    auto path = reports / "dispersion.csv";
    auto out = open_out(path);
    std::optional<double> corr;
    try {
      corr = error_dispersion_correlation(store);
    } catch (const UndefinedCorrelationError&) {
    } catch (const ShapeError&) {
    }
    out << "# pearson_rmse_stddev: " << fmt_opt(corr) << '\n';
    out << "scenario_id,location,algorithm,rmse,rmse_stddev\n";
    for (const auto& r : store.records()) {
      if (!r.ok()) continue;
      out << text::sanitize_field(r.scenario_id) << ',' << text::sanitize_field(r.location) << ','
          << text::sanitize_field(r.algorithm) << ',' << text::format_real(r.metrics.rmse.value) << ','
          << text::format_real(r.metrics.rmse.stddev) << '\n';
    }
    written.push_back(path);
  }
  if (all || kind == ReportKind::Series) {
    fs::create_directories(reports / "series");
    for (const auto& r : store.records()) {
      if (!r.ok()) continue;
      const auto key = key_of(r);
      auto path = reports / "series" / (key.file_stem() + ".csv");
      auto out = open_out(path);
      emit_series(store, key, out);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace ccadm
