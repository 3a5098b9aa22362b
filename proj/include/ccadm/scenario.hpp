#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccadm {

class DataRepository;

/// `source.attribute`; the source id may not contain a dot.
struct AttributeRef {
  std::string source_id;
  std::string attribute;

  std::string str() const { return source_id + "." + attribute; }
  /// Splits at the first dot. Throws ParseError on a malformed reference.
  static AttributeRef parse(const std::string& text);

  friend auto operator<=>(const AttributeRef&, const AttributeRef&) = default;
  friend bool operator==(const AttributeRef&, const AttributeRef&) = default;
};

enum class ScenarioKind { Standalone, Cadm, Cdm, CadmCdm };

/// Scenario kind plus the number of collaborative sources for the CDM kinds.
struct ScenarioLabel {
  ScenarioKind kind = ScenarioKind::Standalone;
  std::size_t sources = 0;

  /// "Standalone", "CADM", "CDM(3)", "CADM+CDM(2)".
  std::string str() const;
  static ScenarioLabel parse(const std::string& text);

  friend bool operator==(const ScenarioLabel&, const ScenarioLabel&) = default;
};

/// The label is a pure function of which lists are empty.
ScenarioLabel derive_label(bool has_context, std::size_t collaborative_sources);

struct CollaborativeSource {
  std::string source_id;
  std::vector<AttributeRef> attributes;

  friend bool operator==(const CollaborativeSource&, const CollaborativeSource&) = default;
};

/// One row of the scenario matrix.
///
/// `main_attributes` always contains `target`; the target's own history is a
/// feature in every scenario.
struct ScenarioSpec {
  std::string scenario_id;
  AttributeRef target;
  std::vector<AttributeRef> main_attributes;
  std::vector<AttributeRef> context_attributes;
  std::vector<CollaborativeSource> collaborative;
  ScenarioLabel label;

  const std::string& location() const { return target.source_id; }

  /// main ++ context ++ collaborative, in assembly order.
  std::vector<AttributeRef> all_attributes() const;

  /// Structural invariants (target in main source, no repeated reference,
  /// label consistent with the emptiness pattern). Throws ParseError.
  void check() const;

  /// Every reference names an existing source and attribute. Throws
  /// UnresolvedRefError.
  void resolve(const DataRepository& repo) const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct SuiteDefaults {
  std::size_t window = 7;
  double split = 0.8;
  std::vector<std::string> learners{"KNN", "DT", "GBT", "DL"};

  friend bool operator==(const SuiteDefaults&, const SuiteDefaults&) = default;
};

struct ScenarioSuite {
  std::vector<ScenarioSpec> scenarios;
  SuiteDefaults defaults;

  const ScenarioSpec* find(const std::string& scenario_id) const;
  /// Non-empty, unique ids, every spec passes `check()`.
  void check() const;
  void resolve(const DataRepository& repo) const;

  friend bool operator==(const ScenarioSuite&, const ScenarioSuite&) = default;
};

/// Reads the scenario matrix format:
///
///     # comment
///     @window=7
///     @split=0.8
///     @learners=KNN;DT;GBT;DL
///     scenario_id,target:S.hum,context:S.temp,collab:R.hum,collab:T.hum,label
///     S-cadm-cdm2,val,val,val,val,CADM+CDM(2)
///     S-standalone,val,?,?,?,Standalone
///
/// Column roles are `target`, `main`, `context` and `collab`. A row selects a
/// column with `val` and ignores it with `?`. Every row selects exactly one
/// target column. The optional trailing `label` column is checked against the
/// derived label. Collaborative sources are ordered by first selected column.
ScenarioSuite read_suite(std::istream& in, char delimiter = ',');
ScenarioSuite parse_suite(const std::filesystem::path& path, char delimiter = ',');
/// Parses, then resolves every reference against `repo`.
ScenarioSuite parse_suite(const std::filesystem::path& path, const DataRepository& repo, char delimiter = ',');

/// Inverse of `read_suite`. Throws ConfigError when the suite's attribute
/// orders cannot share one column order.
void write_suite(std::ostream& out, const ScenarioSuite& suite, char delimiter = ',');

struct PresetRequest {
  std::string main;
  std::string target_attribute;
  std::string context_attribute;
  std::vector<std::string> neighbors;
  std::string neighbor_attribute;
};

/// The six standard scenarios for one location: Standalone, CADM,
/// CADM+CDM(1..3) and CDM(3), using the first neighbors in the given order.
/// Ids are `<main>-standalone`, `<main>-cadm`, `<main>-cadm-cdm<n>`,
/// `<main>-cdm3`. Throws InsufficientNeighborsError with fewer than 3.
ScenarioSuite generate_presets(const PresetRequest& request);

}  // namespace ccadm
