#include "ccadm/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ccadm/dataset.hpp"
#include "ccadm/errors.hpp"
#include "ccadm/text.hpp"

namespace ccadm {

AttributeRef AttributeRef::parse(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == text.size())
    throw ParseError(fmt::format("'{}' is not a source.attribute reference", text));
  return {text.substr(0, dot), text.substr(dot + 1)};
}

std::string ScenarioLabel::str() const {
  switch (kind) {
    case ScenarioKind::Standalone:
      return "Standalone";
    case ScenarioKind::Cadm:
      return "CADM";
    case ScenarioKind::Cdm:
      return fmt::format("CDM({})", sources);
    case ScenarioKind::CadmCdm:
      return fmt::format("CADM+CDM({})", sources);
  }
  return {};
}

ScenarioLabel ScenarioLabel::parse(const std::string& text) {
  if (text == "Standalone") return {ScenarioKind::Standalone, 0};
  if (text == "CADM") return {ScenarioKind::Cadm, 0};
  auto parse_count = [&](std::string_view prefix, ScenarioKind kind) -> std::optional<ScenarioLabel> {
    std::string_view s = text;
    if (s.size() <= prefix.size() + 1 || s.substr(0, prefix.size()) != prefix || s.back() != ')')
      return std::nullopt;
    auto n = text::parse_integer(s.substr(prefix.size(), s.size() - prefix.size() - 1));
    if (!n || *n < 1) return std::nullopt;
    return ScenarioLabel{kind, static_cast<std::size_t>(*n)};
  };
  if (auto l = parse_count("CADM+CDM(", ScenarioKind::CadmCdm)) return *l;
  if (auto l = parse_count("CDM(", ScenarioKind::Cdm)) return *l;
  throw ParseError(fmt::format("unknown scenario label '{}'", text));
}

ScenarioLabel derive_label(bool has_context, std::size_t collaborative_sources) {
  if (collaborative_sources == 0)
    return has_context ? ScenarioLabel{ScenarioKind::Cadm, 0} : ScenarioLabel{ScenarioKind::Standalone, 0};
  return {has_context ? ScenarioKind::CadmCdm : ScenarioKind::Cdm, collaborative_sources};
}

std::vector<AttributeRef> ScenarioSpec::all_attributes() const {
  std::vector<AttributeRef> out = main_attributes;
  out.insert(out.end(), context_attributes.begin(), context_attributes.end());
  for (const auto& cs : collaborative) out.insert(out.end(), cs.attributes.begin(), cs.attributes.end());
  return out;
}

void ScenarioSpec::check() const {
  if (scenario_id.empty()) throw ParseError("scenario id must not be empty");
  auto where = [&](const std::string& msg) { return ParseError(fmt::format("scenario '{}': {}", scenario_id, msg)); };
  if (target.source_id.empty() || target.attribute.empty()) throw where("target reference is empty");
  if (std::find(main_attributes.begin(), main_attributes.end(), target) == main_attributes.end())
    throw where("target must be one of the main attributes");
  for (const auto& ref : main_attributes) {
    if (ref.source_id != target.source_id)
      throw where(fmt::format("main attribute '{}' is not from the main source '{}'", ref.str(), target.source_id));
  }
  std::set<std::string> sources;
  for (const auto& cs : collaborative) {
    if (cs.attributes.empty()) throw where(fmt::format("collaborative source '{}' has no attributes", cs.source_id));
    if (cs.source_id == target.source_id) throw where("the main source cannot also be a collaborative source");
    if (!sources.insert(cs.source_id).second)
      throw where(fmt::format("collaborative source '{}' listed twice", cs.source_id));
    for (const auto& ref : cs.attributes) {
      if (ref.source_id != cs.source_id)
        throw where(fmt::format("'{}' listed under collaborative source '{}'", ref.str(), cs.source_id));
    }
  }
  std::set<AttributeRef> seen;
  for (const auto& ref : all_attributes()) {
    if (ref.source_id.empty() || ref.attribute.empty()) throw where("empty attribute reference");
    if (!seen.insert(ref).second) throw where(fmt::format("'{}' appears twice", ref.str()));
  }
  if (label != derive_label(!context_attributes.empty(), collaborative.size()))
    throw where(fmt::format("label {} does not match its attributes ({})", label.str(),
                            derive_label(!context_attributes.empty(), collaborative.size()).str()));
}

void ScenarioSpec::resolve(const DataRepository& repo) const {
  for (const auto& ref : all_attributes()) {
    if (!repo.contains(ref.source_id))
      throw UnresolvedRefError(fmt::format("scenario '{}': unknown source '{}'", scenario_id, ref.source_id));
    if (!repo.get(ref.source_id).has_attribute(ref.attribute))
      throw UnresolvedRefError(fmt::format("scenario '{}': source '{}' has no attribute '{}'", scenario_id,
                                           ref.source_id, ref.attribute));
  }
}

const ScenarioSpec* ScenarioSuite::find(const std::string& scenario_id) const {
  for (const auto& s : scenarios) {
    if (s.scenario_id == scenario_id) return &s;
  }
  return nullptr;
}

void ScenarioSuite::check() const {
  if (scenarios.empty()) throw ParseError("scenario suite has no scenarios");
  std::set<std::string> ids;
  for (const auto& s : scenarios) {
    s.check();
    if (!ids.insert(s.scenario_id).second)
      throw DuplicateScenarioError(fmt::format("duplicate scenario id '{}'", s.scenario_id));
  }
  if (defaults.window < 1) throw ParseError("suite window must be at least 1");
  if (!(defaults.split > 0.0 && defaults.split < 1.0)) throw ParseError("suite split must lie in (0, 1)");
}

void ScenarioSuite::resolve(const DataRepository& repo) const {
  for (const auto& s : scenarios) s.resolve(repo);
}

namespace {

enum class Role { Target, Main, Context, Collab };

struct Column {
  Role role;
  AttributeRef ref;

  friend bool operator==(const Column&, const Column&) = default;
};

std::string_view role_name(Role r) {
  switch (r) {
    case Role::Target:
      return "target";
    case Role::Main:
      return "main";
    case Role::Context:
      return "context";
    case Role::Collab:
      return "collab";
  }
  return {};
}

Column parse_column(const std::string& header) {
  auto colon = header.find(':');
  if (colon == std::string::npos)
    throw ParseError(fmt::format("column '{}' lacks a role prefix (target:, main:, context:, collab:)", header));
  std::string role = header.substr(0, colon);
  AttributeRef ref = AttributeRef::parse(header.substr(colon + 1));
  if (role == "target") return {Role::Target, ref};
  if (role == "main") return {Role::Main, ref};
  if (role == "context") return {Role::Context, ref};
  if (role == "collab") return {Role::Collab, ref};
  throw ParseError(fmt::format("unknown column role '{}' in '{}'", role, header));
}

void apply_directive(const std::string& line, SuiteDefaults& defaults, char delimiter) {
  auto eq = line.find('=');
  if (eq == std::string::npos) throw ParseError(fmt::format("malformed directive '{}'", line));
  std::string key{text::trim(std::string_view(line).substr(1, eq - 1))};
  std::string value{text::trim(std::string_view(line).substr(eq + 1))};
  if (key == "window") {
    auto w = text::parse_integer(value);
    if (!w || *w < 1) throw ParseError(fmt::format("bad @window value '{}'", value));
    defaults.window = static_cast<std::size_t>(*w);
  } else if (key == "split") {
    auto s = text::parse_real(value);
    if (!s || !(*s > 0.0 && *s < 1.0)) throw ParseError(fmt::format("bad @split value '{}'", value));
    defaults.split = *s;
  } else if (key == "learners") {
    char sep = delimiter == ';' ? '|' : ';';
    defaults.learners = text::split(value, sep);
    if (defaults.learners.empty() || std::any_of(defaults.learners.begin(), defaults.learners.end(),
                                                  [](const std::string& s) { return s.empty(); }))
      throw ParseError(fmt::format("bad @learners value '{}'", value));
  } else {
    throw ParseError(fmt::format("unknown directive '@{}'", key));
  }
}

ScenarioSpec build_spec(const std::string& id, const std::vector<Column>& columns,
                        const std::vector<bool>& selected, std::size_t line_no) {
  ScenarioSpec spec;
  spec.scenario_id = id;
  std::optional<AttributeRef> target;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (selected[i] && columns[i].role == Role::Target) {
      if (target) throw ParseError(fmt::format("line {}: scenario '{}' selects more than one target", line_no, id));
      target = columns[i].ref;
    }
  }
  if (!target) throw ParseError(fmt::format("line {}: scenario '{}' selects no target", line_no, id));
  spec.target = *target;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (!selected[i]) continue;
    const auto& col = columns[i];
    switch (col.role) {
      case Role::Target:
      case Role::Main:
        spec.main_attributes.push_back(col.ref);
        break;
      case Role::Context:
        spec.context_attributes.push_back(col.ref);
        break;
      case Role::Collab: {
        auto it = std::find_if(spec.collaborative.begin(), spec.collaborative.end(),
                               [&](const CollaborativeSource& cs) { return cs.source_id == col.ref.source_id; });
        if (it == spec.collaborative.end()) {
          spec.collaborative.push_back({col.ref.source_id, {col.ref}});
        } else {
          it->attributes.push_back(col.ref);
        }
        break;
      }
    }
  }
  spec.label = derive_label(!spec.context_attributes.empty(), spec.collaborative.size());
  return spec;
}

}  // namespace

ScenarioSuite read_suite(std::istream& in, char delimiter) {
  ScenarioSuite suite;
  std::vector<Column> columns;
  bool has_label = false;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto trimmed = std::string(text::trim(line));
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (trimmed.front() == '@') {
      if (have_header) throw ParseError(fmt::format("line {}: directives must precede the header", line_no));
      apply_directive(trimmed, suite.defaults, delimiter);
      continue;
    }
    auto cells = text::split(trimmed, delimiter);
    if (!have_header) {
      if (cells.empty() || cells[0] != "scenario_id")
        throw ParseError(fmt::format("line {}: header must start with 'scenario_id'", line_no));
      std::size_t end = cells.size();
      if (cells.back() == "label") {
        has_label = true;
        --end;
      }
      for (std::size_t i = 1; i < end; ++i) {
        auto col = parse_column(cells[i]);
        if (std::find(columns.begin(), columns.end(), col) != columns.end())
          throw ParseError(fmt::format("line {}: duplicate column '{}'", line_no, cells[i]));
        columns.push_back(std::move(col));
      }
      if (columns.empty()) throw ParseError("scenario header names no attribute columns");
      have_header = true;
      continue;
    }
    std::size_t expected = columns.size() + 1 + (has_label ? 1 : 0);
    if (cells.size() != expected)
      throw ParseError(fmt::format("line {}: {} cells, expected {}", line_no, cells.size(), expected));
    std::vector<bool> selected(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto& cell = cells[i + 1];
      if (cell == "val") {
        selected[i] = true;
      } else if (cell == "?") {
        selected[i] = false;
      } else {
        throw ParseError(fmt::format("line {}: cell '{}' must be 'val' or '?'", line_no, cell));
      }
    }
    auto spec = build_spec(cells[0], columns, selected, line_no);
    if (has_label) {
      auto written = ScenarioLabel::parse(cells.back());
      if (written != spec.label)
        throw ParseError(fmt::format("line {}: scenario '{}' is labelled {} but its attributes make it {}", line_no,
                                     spec.scenario_id, written.str(), spec.label.str()));
    }
    if (suite.find(spec.scenario_id))
      throw DuplicateScenarioError(fmt::format("line {}: duplicate scenario id '{}'", line_no, spec.scenario_id));
    suite.scenarios.push_back(std::move(spec));
  }
  if (suite.scenarios.empty()) throw ParseError("no scenarios in suite file");
  suite.check();
  return suite;
}

ScenarioSuite parse_suite(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open scenario file '{}'", path.string()));
  return read_suite(in, delimiter);
}

ScenarioSuite parse_suite(const std::filesystem::path& path, const DataRepository& repo, char delimiter) {
  auto suite = parse_suite(path, delimiter);
  suite.resolve(repo);
  return suite;
}

namespace {

std::vector<Column> scenario_columns(const ScenarioSpec& spec) {
  std::vector<Column> cols;
  for (const auto& ref : spec.main_attributes) cols.push_back({ref == spec.target ? Role::Target : Role::Main, ref});
  for (const auto& ref : spec.context_attributes) cols.push_back({Role::Context, ref});
  for (const auto& cs : spec.collaborative) {
    for (const auto& ref : cs.attributes) cols.push_back({Role::Collab, ref});
  }
  return cols;
}

void write_suite_unchecked(std::ostream& out, const ScenarioSuite& suite, const std::vector<Column>& columns,
                           char delimiter) {
  char sep = delimiter == ';' ? '|' : ';';
  out << "@window=" << suite.defaults.window << '\n';
  out << "@split=" << text::format_real(suite.defaults.split) << '\n';
  out << "@learners=" << text::join(suite.defaults.learners, std::string(1, sep)) << '\n';
  out << "scenario_id";
  for (const auto& col : columns) out << delimiter << role_name(col.role) << ':' << col.ref.str();
  out << delimiter << "label\n";
  for (const auto& spec : suite.scenarios) {
    auto own = scenario_columns(spec);
    out << spec.scenario_id;
    for (const auto& col : columns) {
      bool on = std::find(own.begin(), own.end(), col) != own.end();
      out << delimiter << (on ? "val" : "?");
    }
    out << delimiter << spec.label.str() << '\n';
  }
}

}  // namespace

void write_suite(std::ostream& out, const ScenarioSuite& suite, char delimiter) {
  suite.check();
  std::vector<Column> columns;
  for (const auto& spec : suite.scenarios) {
    std::ptrdiff_t prev = -1;
    for (const auto& col : scenario_columns(spec)) {
      auto it = std::find(columns.begin(), columns.end(), col);
      if (it != columns.end()) {
        prev = it - columns.begin();
      } else if (prev < 0) {
        columns.push_back(col);
        prev = static_cast<std::ptrdiff_t>(columns.size()) - 1;
      } else {
        columns.insert(columns.begin() + prev + 1, col);
        ++prev;
      }
    }
  }
  std::ostringstream buffer;
  write_suite_unchecked(buffer, suite, columns, delimiter);
  std::istringstream reread(buffer.str());
  if (read_suite(reread, delimiter) != suite)
    throw ConfigError("scenario suite cannot be written as one matrix: attribute orders conflict between scenarios");
  out << buffer.str();
}

ScenarioSuite generate_presets(const PresetRequest& request) {
  if (request.neighbors.size() < 3)
    throw InsufficientNeighborsError(
        fmt::format("presets need at least 3 neighbors, got {}", request.neighbors.size()));
  const AttributeRef target{request.main, request.target_attribute};
  const AttributeRef context{request.main, request.context_attribute};
  auto neighbors = [&](std::size_t n) {
    std::vector<CollaborativeSource> out;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& id = request.neighbors[i];
      out.push_back({id, {AttributeRef{id, request.neighbor_attribute}}});
    }
    return out;
  };
  auto make = [&](std::string suffix, bool with_context, std::size_t n) {
    ScenarioSpec spec;
    spec.scenario_id = request.main + "-" + std::move(suffix);
    spec.target = target;
    spec.main_attributes = {target};
    if (with_context) spec.context_attributes = {context};
    spec.collaborative = neighbors(n);
    spec.label = derive_label(with_context, n);
    return spec;
  };
  ScenarioSuite suite;
  suite.scenarios = {make("standalone", false, 0), make("cadm", true, 0),      make("cadm-cdm1", true, 1),
                     make("cadm-cdm2", true, 2),   make("cadm-cdm3", true, 3), make("cdm3", false, 3)};
  suite.check();
  return suite;
}

}  // namespace ccadm
