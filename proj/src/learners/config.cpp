#include "ccadm/learners/config.hpp"

#include <fmt/format.h>

#include "ccadm/errors.hpp"
#include "ccadm/text.hpp"

namespace ccadm {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Knn:
      return "KNN";
    case Algorithm::DecisionTree:
      return "DT";
    case Algorithm::GradientBoostedTrees:
      return "GBT";
    case Algorithm::DeepLearning:
      return "DL";
  }
  return {};
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::Knn, Algorithm::DecisionTree, Algorithm::GradientBoostedTrees, Algorithm::DeepLearning}) {
    if (text::iequals(name, algorithm_name(a))) return a;
  }
  throw ConfigError(fmt::format("unknown algorithm '{}' (expected KNN, DT, GBT or DL)", name));
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Rectifier:
      return "Rectifier";
    case Activation::Tanh:
      return "Tanh";
    case Activation::ExpRectifier:
      return "ExpRectifier";
  }
  return {};
}

Activation parse_activation(std::string_view name) {
  for (auto a : {Activation::Rectifier, Activation::Tanh, Activation::ExpRectifier}) {
    if (text::iequals(name, activation_name(a))) return a;
  }
  throw ConfigError(fmt::format("unknown activation '{}' (expected Rectifier, Tanh or ExpRectifier)", name));
}

std::string format_params(const ParamList& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

ParamList parse_params(std::string_view text) {
  ParamList out;
  if (text::trim(text).empty()) return out;
  for (const auto& item : text::split(text, ';')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(fmt::format("malformed parameter '{}'", item));
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

namespace {

int to_int(std::string_view param, std::string_view value) {
  auto v = text::parse_integer(value);
  if (!v || *v < -1'000'000'000LL || *v > 1'000'000'000LL)
    throw ConfigError(fmt::format("parameter {}: '{}' is not an integer", param, value));
  return static_cast<int>(*v);
}

double to_real(std::string_view param, std::string_view value) {
  auto v = text::parse_real(value);
  if (!v) throw ConfigError(fmt::format("parameter {}: '{}' is not a number", param, value));
  return *v;
}

std::vector<int> to_layers(std::string_view param, std::string_view value) {
  std::vector<int> layers;
  for (const auto& part : text::split(value, 'x')) layers.push_back(to_int(param, part));
  return layers;
}

std::string layers_text(const std::vector<int>& layers) {
  std::string out;
  for (std::size_t i = 0; i < layers.size(); ++i) out += (i ? "x" : "") + std::to_string(layers[i]);
  return out;
}

[[noreturn]] void unknown(Algorithm a, std::string_view param) {
  throw ConfigError(fmt::format("{} has no parameter '{}'", algorithm_name(a), param));
}

}  // namespace

LearnerConfig LearnerConfig::defaults(Algorithm algorithm) {
  LearnerConfig c;
  c.name_ = std::string(algorithm_name(algorithm));
  switch (algorithm) {
    case Algorithm::Knn:
      c.params_ = KnnParams{};
      break;
    case Algorithm::DecisionTree:
      c.params_ = TreeParams{};
      break;
    case Algorithm::GradientBoostedTrees:
      c.params_ = GbtParams{};
      break;
    case Algorithm::DeepLearning:
      c.params_ = DlParams{};
      break;
  }
  return c;
}

Algorithm LearnerConfig::algorithm() const {
  switch (params_.index()) {
    case 0:
      return Algorithm::Knn;
    case 1:
      return Algorithm::DecisionTree;
    case 2:
      return Algorithm::GradientBoostedTrees;
    default:
      return Algorithm::DeepLearning;
  }
}

void LearnerConfig::set(std::string_view param, std::string_view value) {
  const Algorithm a = algorithm();
  auto saved = params_;
  if (auto* p = std::get_if<KnnParams>(&params_)) {
    if (param == "k") {
      p->k = to_int(param, value);
    } else if (param == "measure") {
      if (!text::iequals(value, "Euclidean"))
        throw ConfigError(fmt::format("KNN measure '{}' unsupported (only Euclidean)", value));
    } else {
      unknown(a, param);
    }
  } else if (auto* p = std::get_if<TreeParams>(&params_)) {
    if (param == "max_depth") {
      p->max_depth = to_int(param, value);
    } else if (param == "min_gain") {
      p->min_gain = to_real(param, value);
    } else if (param == "min_leaf_size") {
      p->min_leaf_size = to_int(param, value);
    } else {
      unknown(a, param);
    }
  } else if (auto* p = std::get_if<GbtParams>(&params_)) {
    if (param == "n_trees") {
      p->n_trees = to_int(param, value);
    } else if (param == "max_depth") {
      p->max_depth = to_int(param, value);
    } else if (param == "learning_rate") {
      p->learning_rate = to_real(param, value);
    } else if (param == "n_bins") {
      p->n_bins = to_int(param, value);
    } else {
      unknown(a, param);
    }
  } else if (auto* p = std::get_if<DlParams>(&params_)) {
    if (param == "activation") {
      p->activation = parse_activation(value);
    } else if (param == "epochs") {
      p->epochs = to_int(param, value);
    } else if (param == "hidden_layers") {
      p->hidden_layers = to_layers(param, value);
    } else if (param == "learning_rate") {
      p->learning_rate = to_real(param, value);
    } else if (param == "batch_size") {
      p->batch_size = to_int(param, value);
    } else {
      unknown(a, param);
    }
  }
  try {
    validate();
  } catch (...) {
    params_ = std::move(saved);
    throw;
  }
}

void LearnerConfig::set_all(const ParamList& params) {
  for (const auto& [k, v] : params) set(k, v);
}

ParamList LearnerConfig::params() const {
  using text::format_real;
  if (const auto* p = std::get_if<KnnParams>(&params_)) return {{"k", std::to_string(p->k)}, {"measure", "Euclidean"}};
  if (const auto* p = std::get_if<TreeParams>(&params_))
    return {{"max_depth", std::to_string(p->max_depth)},
            {"min_gain", format_real(p->min_gain)},
            {"min_leaf_size", std::to_string(p->min_leaf_size)}};
  if (const auto* p = std::get_if<GbtParams>(&params_))
    return {{"n_trees", std::to_string(p->n_trees)},
            {"max_depth", std::to_string(p->max_depth)},
            {"learning_rate", format_real(p->learning_rate)},
            {"n_bins", std::to_string(p->n_bins)}};
  const auto& p = std::get<DlParams>(params_);
  return {{"activation", std::string(activation_name(p.activation))},
          {"epochs", std::to_string(p.epochs)},
          {"hidden_layers", layers_text(p.hidden_layers)},
          {"learning_rate", format_real(p.learning_rate)},
          {"batch_size", std::to_string(p.batch_size)}};
}

void LearnerConfig::validate() const {
  auto fail = [&](const std::string& msg) { throw ConfigError(fmt::format("{}: {}", name_, msg)); };
  if (const auto* p = std::get_if<KnnParams>(&params_)) {
    if (p->k < 1) fail("k must be at least 1");
  } else if (const auto* p = std::get_if<TreeParams>(&params_)) {
    if (p->max_depth < 1) fail("max_depth must be at least 1");
    if (!(p->min_gain >= 0.0)) fail("min_gain must be non-negative");
    if (p->min_leaf_size < 1) fail("min_leaf_size must be at least 1");
  } else if (const auto* p = std::get_if<GbtParams>(&params_)) {
    if (p->n_trees < 0) fail("n_trees must be non-negative");
    if (p->max_depth < 1) fail("max_depth must be at least 1");
    if (!(p->learning_rate > 0.0 && p->learning_rate <= 1.0)) fail("learning_rate must lie in (0, 1]");
    if (p->n_bins < 2) fail("n_bins must be at least 2");
  } else if (const auto* p = std::get_if<DlParams>(&params_)) {
    if (p->epochs < 1) fail("epochs must be at least 1");
    if (p->hidden_layers.empty()) fail("hidden_layers must name at least one layer");
    for (int h : p->hidden_layers) {
      if (h < 1) fail("hidden layer sizes must be at least 1");
    }
    if (!(p->learning_rate > 0.0)) fail("learning_rate must be positive");
    if (p->batch_size < 1) fail("batch_size must be at least 1");
  }
}

}  // namespace ccadm
