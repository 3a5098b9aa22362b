#include "ccadm/experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ccadm/errors.hpp"
#include "ccadm/text.hpp"

namespace ccadm {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(fmt::format("{} must be an object", where));
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

std::string get_string(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(fmt::format("{}: '{}' must be a string", where, key));
  return v.get<std::string>();
}

std::size_t get_count(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(fmt::format("{}: '{}' must be a positive integer", where, key));
  return v.get<std::size_t>();
}

double get_real(const Json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(fmt::format("{}: '{}' must be a number", where, key));
  return v.get<double>();
}

// Parameter values may be written as JSON strings, numbers, booleans or (for
// hidden_layers) integer arrays; the learner config parses the text form.
std::string param_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return text::format_real(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& item : v) parts.push_back(param_text(item, where));
    return text::join(parts, "x");
  }
  throw ConfigError(fmt::format("{}: unsupported parameter value {}", where, v.dump()));
}

fs::path resolve_path(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

char parse_delimiter(const std::string& s) {
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) throw ConfigError(fmt::format("delimiter must be a single character, got '{}'", s));
  return s[0];
}

LearnerConfig parse_learner(const Json& item, std::size_t index) {
  const std::string where = fmt::format("algorithms[{}]", index);
  if (item.is_string()) return LearnerConfig::defaults(parse_algorithm(item.get<std::string>()));
  check_keys(item, where, {"algorithm", "name", "params"});
  if (!item.contains("algorithm")) throw ConfigError(fmt::format("{}: missing 'algorithm'", where));
  auto cfg = LearnerConfig::defaults(parse_algorithm(get_string(item, "algorithm", where)));
  if (item.contains("name")) cfg.set_name(get_string(item, "name", where));
  if (item.contains("params")) {
    const auto& params = item.at("params");
    if (!params.is_object()) throw ConfigError(fmt::format("{}: 'params' must be an object", where));
    for (const auto& [key, value] : params.items()) cfg.set(key, param_text(value, where));
  }
  return cfg;
}

ScenarioSuite parse_presets(const Json& list) {
  if (!list.is_array() || list.empty()) throw ConfigError("'presets' must be a non-empty array");
  ScenarioSuite suite;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& item = list[i];
    const std::string where = fmt::format("presets[{}]", i);
    check_keys(item, where, {"main", "target", "context", "neighbors", "neighbor_attribute"});
    for (const char* key : {"main", "target", "context", "neighbors"}) {
      if (!item.contains(key)) throw ConfigError(fmt::format("{}: missing '{}'", where, key));
    }
    PresetRequest req;
    req.main = get_string(item, "main", where);
    req.target_attribute = get_string(item, "target", where);
    req.context_attribute = get_string(item, "context", where);
    req.neighbor_attribute =
        item.contains("neighbor_attribute") ? get_string(item, "neighbor_attribute", where) : req.target_attribute;
    const auto& neighbors = item.at("neighbors");
    if (!neighbors.is_array()) throw ConfigError(fmt::format("{}: 'neighbors' must be an array", where));
    for (const auto& n : neighbors) {
      if (!n.is_string()) throw ConfigError(fmt::format("{}: neighbor ids must be strings", where));
      req.neighbors.push_back(n.get<std::string>());
    }
    auto part = generate_presets(req);
    for (auto& spec : part.scenarios) suite.scenarios.push_back(std::move(spec));
  }
  return suite;
}

OptimizeSpec parse_optimize(const Json& obj) {
  const std::string where = "optimize";
  check_keys(obj, where, {"scenario", "algorithm", "grid", "windows", "objective"});
  for (const char* key : {"scenario", "algorithm", "grid"}) {
    if (!obj.contains(key)) throw ConfigError(fmt::format("{}: missing '{}'", where, key));
  }
  OptimizeSpec spec;
  spec.scenario_id = get_string(obj, "scenario", where);
  spec.algorithm = get_string(obj, "algorithm", where);
  const auto& grid = obj.at("grid");
  if (grid.is_string()) {
    spec.grid = grid_presets::by_name(grid.get<std::string>());
  } else if (grid.is_array()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::string axis_where = fmt::format("optimize.grid[{}]", i);
      check_keys(grid[i], axis_where, {"param", "values"});
      if (!grid[i].contains("param") || !grid[i].contains("values"))
        throw ConfigError(fmt::format("{}: needs 'param' and 'values'", axis_where));
      GridAxis axis{get_string(grid[i], "param", axis_where), {}};
      const auto& values = grid[i].at("values");
      if (!values.is_array() || values.empty())
        throw ConfigError(fmt::format("{}: 'values' must be a non-empty array", axis_where));
      for (const auto& v : values) axis.values.push_back(param_text(v, axis_where));
      spec.grid.axes.push_back(std::move(axis));
    }
  } else {
    throw ConfigError("optimize.grid must be a preset name or an array of axes");
  }
  if (obj.contains("objective")) {
    try {
      spec.grid.objective = parse_measure(get_string(obj, "objective", where));
    } catch (const MeasureError& e) {
      throw ConfigError(e.what());
    }
  }
  if (obj.contains("windows")) {
    const auto& w = obj.at("windows");
    if (w.is_string() && w.get<std::string>() == "preset") {
      spec.windows = grid_presets::windows();
    } else if (w.is_array() && !w.empty()) {
      std::vector<std::size_t> ws;
      for (const auto& v : w) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
          throw ConfigError("optimize.windows must hold positive integers");
        ws.push_back(v.get<std::size_t>());
      }
      spec.windows = std::move(ws);
    } else {
      throw ConfigError("optimize.windows must be \"preset\" or a non-empty array");
    }
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& json_text, const fs::path& base_dir) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("configuration is not valid JSON: {}", e.what()));
  }
  const std::string where = "configuration";
  check_keys(root, where,
             {"data_dir", "delimiter", "extension", "scenario_file", "presets", "scenario_matrix", "algorithms",
              "window", "split", "seed", "eps_re", "workers", "optimize"});
  if (!root.contains("data_dir")) throw ConfigError("configuration: missing 'data_dir'");

  ExperimentConfig cfg;
  cfg.data_dir = resolve_path(base_dir, get_string(root, "data_dir", where)).lexically_normal();
  if (root.contains("delimiter")) cfg.load.delimiter = parse_delimiter(get_string(root, "delimiter", where));
  if (root.contains("extension")) cfg.extension = get_string(root, "extension", where);

  const int sources = static_cast<int>(root.contains("scenario_file")) + static_cast<int>(root.contains("presets")) +
                      static_cast<int>(root.contains("scenario_matrix"));
  if (sources != 1)
    throw ConfigError("configuration needs exactly one of 'scenario_file', 'presets' and 'scenario_matrix'");
  ScenarioSuite suite;
  if (root.contains("scenario_file")) {
    suite = parse_suite(resolve_path(base_dir, get_string(root, "scenario_file", where)), cfg.load.delimiter);
  } else if (root.contains("presets")) {
    suite = parse_presets(root.at("presets"));
  } else {
    const auto& lines = root.at("scenario_matrix");
    if (!lines.is_array()) throw ConfigError("'scenario_matrix' must be an array of lines");
    std::string joined;
    for (const auto& line : lines) {
      if (!line.is_string()) throw ConfigError("'scenario_matrix' must be an array of lines");
      joined += line.get<std::string>() + "\n";
    }
    std::istringstream in(joined);
    suite = read_suite(in, cfg.load.delimiter);
  }
  cfg.run = RunConfig::from_suite(std::move(suite));

  if (root.contains("algorithms")) {
    const auto& list = root.at("algorithms");
    if (!list.is_array() || list.empty()) throw ConfigError("'algorithms' must be a non-empty array");
    cfg.run.algorithms.clear();
    for (std::size_t i = 0; i < list.size(); ++i) cfg.run.algorithms.push_back(parse_learner(list[i], i));
  }
  if (root.contains("window")) cfg.run.window = get_count(root, "window", where);
  if (root.contains("split")) cfg.run.split = get_real(root, "split", where);
  if (root.contains("seed")) {
    const auto& v = root.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError("configuration: 'seed' must be a non-negative integer");
    cfg.run.seed = v.get<std::uint64_t>();
  }
  if (root.contains("eps_re")) cfg.run.eps_re = get_real(root, "eps_re", where);
  if (root.contains("workers")) cfg.run.workers = get_count(root, "workers", where);
  if (root.contains("optimize")) cfg.optimize = parse_optimize(root.at("optimize"));
  cfg.run.validate();
  return cfg;
}

ExperimentConfig load_experiment(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open configuration '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), fs::absolute(path).parent_path());
}

void apply_overrides(ExperimentConfig& config, const Overrides& o) {
  if (o.window) config.run.window = *o.window;
  if (o.split) config.run.split = *o.split;
  if (o.seed) config.run.seed = *o.seed;
  if (o.workers) config.run.workers = *o.workers;
  config.run.validate();
}

std::string snapshot_json(const ExperimentConfig& config) {
  Json root;
  root["data_dir"] = fs::absolute(config.data_dir).lexically_normal().string();
  root["delimiter"] = config.load.delimiter == '\t' ? std::string("\\t") : std::string(1, config.load.delimiter);
  root["extension"] = config.extension;

  std::ostringstream suite_text;
  write_suite(suite_text, config.run.suite, config.load.delimiter);
  Json lines = Json::array();
  std::istringstream in(suite_text.str());
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  root["scenario_matrix"] = std::move(lines);

  Json algorithms = Json::array();
  for (const auto& learner : config.run.algorithms) {
    Json item;
    item["algorithm"] = std::string(algorithm_name(learner.algorithm()));
    item["name"] = learner.name();
    Json params = Json::object();
    for (const auto& [k, v] : learner.params()) params[k] = v;
    item["params"] = std::move(params);
    algorithms.push_back(std::move(item));
  }
  root["algorithms"] = std::move(algorithms);
  root["window"] = config.run.window;
  root["split"] = config.run.split;
  root["seed"] = config.run.seed;
  root["eps_re"] = config.run.eps_re;

  if (config.optimize) {
    const auto& o = *config.optimize;
    Json opt;
    opt["scenario"] = o.scenario_id;
    opt["algorithm"] = o.algorithm;
    Json axes = Json::array();
    for (const auto& axis : o.grid.axes) axes.push_back({{"param", axis.name}, {"values", axis.values}});
    opt["grid"] = std::move(axes);
    if (o.windows) opt["windows"] = *o.windows;
    opt["objective"] = std::string(measure_name(o.grid.objective));
    root["optimize"] = std::move(opt);
  }
  return root.dump(2) + "\n";
}

DataRepository load_data(const ExperimentConfig& config) {
  auto repo = load_repository(config.data_dir, config.load, config.extension);
  if (repo.empty()) throw ConfigError(fmt::format("no datasets found in '{}'", config.data_dir.string()));
  return repo;
}

}  // namespace ccadm
