#include "ccadm/learners/model.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "ccadm/errors.hpp"
#include "ccadm/learners/gbt.hpp"
#include "ccadm/learners/knn.hpp"
#include "ccadm/learners/mlp.hpp"
#include "ccadm/learners/tree.hpp"
#include "ccadm/rng.hpp"
#include "ccadm/windowing.hpp"

namespace ccadm {

namespace {

class KnnState final : public ModelState {
 public:
  KnnState(const Matrix& X, std::span<const double> y, const KnnParams& p) : model_(X, y, p) {}
  double predict_row(std::span<const double> x) const override { return model_.predict_row(x); }
  void dump(std::ostream& out, const std::vector<std::string>&) const override { model_.dump(out); }

 private:
  KnnRegressor model_;
};

class TreeState final : public ModelState {
 public:
  TreeState(const Matrix& X, std::span<const double> y, const TreeParams& p) : tree_(RegressionTree::fit(X, y, p)) {}
  double predict_row(std::span<const double> x) const override { return tree_.predict_row(x); }
  void dump(std::ostream& out, const std::vector<std::string>& names) const override { tree_.dump(out, names); }

 private:
  RegressionTree tree_;
};

class GbtState final : public ModelState {
 public:
  GbtState(const Matrix& X, std::span<const double> y, const GbtParams& p) : model_(X, y, p) {}
  double predict_row(std::span<const double> x) const override { return model_.predict_row(x); }
  void dump(std::ostream& out, const std::vector<std::string>& names) const override { model_.dump(out, names); }

 private:
  GbtRegressor model_;
};

class DlState final : public ModelState {
 public:
  DlState(const Matrix& X, std::span<const double> y, const DlParams& p, std::uint64_t seed) : model_(X, y, p, seed) {}
  double predict_row(std::span<const double> x) const override { return model_.predict_row(x); }
  void dump(std::ostream& out, const std::vector<std::string>&) const override { model_.dump(out); }

 private:
  DlRegressor model_;
};

}  // namespace

TrainedModel::TrainedModel(LearnerConfig config, std::shared_ptr<const ModelState> state,
                           std::vector<std::string> feature_names, std::uint64_t train_fingerprint, std::uint64_t seed)
    : config_(std::move(config)),
      state_(std::move(state)),
      feature_names_(std::move(feature_names)),
      fingerprint_(train_fingerprint),
      seed_(seed) {}

std::vector<double> TrainedModel::predict(const Matrix& X) const {
  if (X.cols() != feature_count())
    throw FeatureShapeError(
        fmt::format("model trained on {} features, got rows of width {}", feature_count(), X.cols()));
  std::vector<double> out;
  out.reserve(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    auto row = X.row(i);
    for (double v : row) {
      if (!std::isfinite(v)) throw NonFiniteDataError(fmt::format("non-finite feature in prediction row {}", i));
    }
    const double p = state_->predict_row(row);
    if (!std::isfinite(p)) throw NonFiniteDataError(fmt::format("non-finite prediction for row {}", i));
    out.push_back(p);
  }
  return out;
}

void TrainedModel::dump(std::ostream& out) const {
  out << kModelDumpVersion << '\n';
  out << "algorithm " << algorithm_name(config_.algorithm()) << '\n';
  out << "name " << config_.name() << '\n';
  out << "params " << format_params(config_.params()) << '\n';
  out << "seed " << seed_ << '\n';
  out << "train_fingerprint " << fmt::format("{:016x}", fingerprint_) << '\n';
  out << "features " << feature_names_.size() << '\n';
  for (std::size_t j = 0; j < feature_names_.size(); ++j) out << "  " << j << ' ' << feature_names_[j] << '\n';
  state_->dump(out, feature_names_);
}

std::uint64_t fingerprint(const Matrix& X, std::span<const double> y) {
  Fingerprint fp;
  fp.add(static_cast<std::uint64_t>(X.rows())).add(static_cast<std::uint64_t>(X.cols()));
  fp.add_bytes(X.data().data(), X.data().size() * sizeof(double));
  fp.add_bytes(y.data(), y.size() * sizeof(double));
  return fp.value();
}

TrainedModel train(const LearnerConfig& config, const WindowedTable& data, std::uint64_t seed) {
  config.validate();
  if (data.size() == 0) throw ShapeError("cannot train on an empty table");
  if (data.X.rows() != data.y.size()) throw ShapeError("feature rows and targets differ in count");
  for (double v : data.X.data()) {
    if (!std::isfinite(v)) throw NonFiniteDataError("training features contain NaN or infinity");
  }
  for (double v : data.y) {
    if (!std::isfinite(v)) throw NonFiniteDataError("training targets contain NaN or infinity");
  }
  std::shared_ptr<const ModelState> state;
  switch (config.algorithm()) {
    case Algorithm::Knn:
      state = std::make_shared<KnnState>(data.X, data.y, config.knn());
      break;
    case Algorithm::DecisionTree:
      state = std::make_shared<TreeState>(data.X, data.y, config.tree());
      break;
    case Algorithm::GradientBoostedTrees:
      state = std::make_shared<GbtState>(data.X, data.y, config.gbt());
      break;
    case Algorithm::DeepLearning:
      state = std::make_shared<DlState>(data.X, data.y, config.dl(), seed);
      break;
  }
  std::vector<std::string> names = data.feature_names;
  if (names.size() != data.X.cols()) {
    names.clear();
    for (std::size_t j = 0; j < data.X.cols(); ++j) names.push_back(fmt::format("f{}", j));
  }
  return TrainedModel(config, std::move(state), std::move(names), fingerprint(data.X, data.y), seed);
}

}  // namespace ccadm
