#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ccadm {

enum class Algorithm { Knn, DecisionTree, GradientBoostedTrees, DeepLearning };

/// "KNN", "DT", "GBT", "DL".
std::string_view algorithm_name(Algorithm a);
/// Accepts the short names case-insensitively. Throws ConfigError.
Algorithm parse_algorithm(std::string_view name);

enum class Activation { Rectifier, Tanh, ExpRectifier };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

struct KnnParams {
  int k = 5;  // Euclidean distance is the only measure
};

struct TreeParams {
  int max_depth = 4;
  double min_gain = 0.01;
  int min_leaf_size = 2;
};

struct GbtParams {
  int n_trees = 50;
  int max_depth = 7;
  double learning_rate = 0.01;
  int n_bins = 20;
};

struct DlParams {
  Activation activation = Activation::Rectifier;
  int epochs = 5;
  std::vector<int> hidden_layers{50, 50};
  double learning_rate = 0.01;
  int batch_size = 8;
};

/// Ordered (name, value) pairs; the text form of a parameter assignment.
using ParamList = std::vector<std::pair<std::string, std::string>>;

/// "k=5;measure=Euclidean".
std::string format_params(const ParamList& params);
ParamList parse_params(std::string_view text);

/// An algorithm with its hyperparameters.
///
/// `name` identifies the configuration inside a run (defaults to the
/// algorithm's short name) so one suite can compare two settings of the same
/// algorithm.
class LearnerConfig {
 public:
  static LearnerConfig defaults(Algorithm algorithm);

  Algorithm algorithm() const;
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Sets one parameter from text. Throws ConfigError for unknown names,
  /// unparsable values, or values outside their valid range.
  void set(std::string_view param, std::string_view value);
  void set_all(const ParamList& params);

  /// Every parameter, in a fixed order, formatted as text.
  ParamList params() const;

  /// Throws ConfigError when a parameter is out of range.
  void validate() const;

  const KnnParams& knn() const { return std::get<KnnParams>(params_); }
  const TreeParams& tree() const { return std::get<TreeParams>(params_); }
  const GbtParams& gbt() const { return std::get<GbtParams>(params_); }
  const DlParams& dl() const { return std::get<DlParams>(params_); }

  friend bool operator==(const LearnerConfig& a, const LearnerConfig& b) {
    return a.name_ == b.name_ && a.params() == b.params() && a.algorithm() == b.algorithm();
  }

 private:
  std::string name_;
  std::variant<KnnParams, TreeParams, GbtParams, DlParams> params_;
};

}  // namespace ccadm
