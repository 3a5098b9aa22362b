#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "ccadm/errors.hpp"
#include "ccadm/learners/gbt.hpp"
#include "ccadm/learners/knn.hpp"
#include "ccadm/learners/model.hpp"
#include "ccadm/learners/tree.hpp"
#include "ccadm/rng.hpp"
#include "../support/checks.hpp"

using namespace ccadm;
using checks::make_table;

namespace {

LearnerConfig config(Algorithm a, const ParamList& params = {}) {
  auto cfg = LearnerConfig::defaults(a);
  cfg.set_all(params);
  return cfg;
}

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t d) {
  Matrix X(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) X(i, j) = rng.uniform(-3, 3);
  return X;
}

double mse(const std::vector<double>& p, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
  return s / static_cast<double>(y.size());
}

}  // namespace

TEST_SUITE("learners") {
  TEST_CASE("defaults and parameter text") {
    CHECK(format_params(LearnerConfig::defaults(Algorithm::Knn).params()) == "k=5;measure=Euclidean");
    CHECK(format_params(LearnerConfig::defaults(Algorithm::DecisionTree).params()) ==
          "max_depth=4;min_gain=0.01;min_leaf_size=2");
    CHECK(format_params(LearnerConfig::defaults(Algorithm::GradientBoostedTrees).params()) ==
          "n_trees=50;max_depth=7;learning_rate=0.01;n_bins=20");
    const auto dl = LearnerConfig::defaults(Algorithm::DeepLearning);
    CHECK(dl.dl().activation == Activation::Rectifier);
    CHECK(dl.dl().epochs == 5);
    CHECK(dl.dl().hidden_layers == std::vector<int>{50, 50});
    CHECK(parse_params("k=3;measure=Euclidean") == ParamList{{"k", "3"}, {"measure", "Euclidean"}});
    CHECK(parse_algorithm("gbt") == Algorithm::GradientBoostedTrees);
    CHECK(parse_activation("ExpRectifier") == Activation::ExpRectifier);
    CHECK_THROWS_AS(parse_algorithm("SVM"), ConfigError);
  }

  TEST_CASE("invalid parameters are config errors and leave the config unchanged") {
    auto cfg = LearnerConfig::defaults(Algorithm::Knn);
    CHECK_THROWS_AS(cfg.set("k", "0"), ConfigError);
    CHECK_THROWS_AS(cfg.set("k", "two"), ConfigError);
    CHECK_THROWS_AS(cfg.set("depth", "3"), ConfigError);
    CHECK(cfg.knn().k == 5);
    auto gbt = LearnerConfig::defaults(Algorithm::GradientBoostedTrees);
    CHECK_THROWS_AS(gbt.set("learning_rate", "0"), ConfigError);
    CHECK_THROWS_AS(gbt.set("learning_rate", "1.5"), ConfigError);
    CHECK_THROWS_AS(gbt.set("n_bins", "1"), ConfigError);
    auto dl = LearnerConfig::defaults(Algorithm::DeepLearning);
    CHECK_THROWS_AS(dl.set("epochs", "0"), ConfigError);
    CHECK_THROWS_AS(dl.set("activation", "Sigmoid"), ConfigError);
    dl.set("hidden_layers", "8x4");
    CHECK(dl.dl().hidden_layers == std::vector<int>{8, 4});
  }

  TEST_CASE("KNN examples") {
    const auto X = Matrix::from_rows({{1}, {3}});
    const auto m1 = train(config(Algorithm::Knn, {{"k", "1"}}), make_table(X, {10, 30}), 0);
    CHECK(m1.predict(X) == std::vector<double>{10, 30});

    const auto three = Matrix::from_rows({{0}, {2}, {10}});
    const auto m2 = train(config(Algorithm::Knn, {{"k", "2"}}), make_table(three, {0, 2, 10}), 0);
    CHECK(m2.predict(Matrix::from_rows({{1}})) == std::vector<double>{1});
  }

  TEST_CASE("KNN distance ties go to the lower training index") {
    const auto X = Matrix::from_rows({{0}, {2}, {0}, {2}});
    const std::vector<double> y{1, 2, 3, 4};
    KnnRegressor knn(X, y, {1});
    const double q[] = {1.0};
    CHECK(knn.neighbors(q) == std::vector<std::size_t>{0});
    KnnRegressor knn3(X, y, {3});
    CHECK(knn3.neighbors(q) == std::vector<std::size_t>{0, 1, 2});
  }

  TEST_CASE("KNN agrees with the brute-force oracle") {
    const auto r = checks::knn_oracle(50, 31);
    INFO(r.detail);
    CHECK(r.pass);
  }

  TEST_CASE("KNN with k equal to the training size predicts the mean") {
    Rng rng(4);
    const auto X = random_matrix(rng, 25, 3);
    std::vector<double> y(25);
    for (auto& v : y) v = rng.uniform(0, 100);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / 25.0;
    for (const char* k : {"25", "40"}) {
      const auto m = train(config(Algorithm::Knn, {{"k", k}}), make_table(X, y), 0);
      for (double p : m.predict(random_matrix(rng, 10, 3))) CHECK(std::abs(p - mean) <= 1e-12);
    }
  }

  TEST_CASE("standardized KNN ignores positive column scaling") {
    Rng rng(6);
    const auto X = random_matrix(rng, 30, 4);
    std::vector<double> y(30);
    for (auto& v : y) v = rng.normal();
    const auto Q = random_matrix(rng, 15, 4);
    auto Xs = X;
    auto Qs = Q;
    const double scale[] = {1000.0, 0.001, 7.0, 1.0};
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t i = 0; i < 30; ++i) Xs(i, j) *= scale[j];
      for (std::size_t i = 0; i < 15; ++i) Qs(i, j) *= scale[j];
    }
    const auto cfg = config(Algorithm::Knn, {{"k", "3"}});
    const auto a = train(cfg, make_table(X, y), 0).predict(Q);
    const auto b = train(cfg, make_table(Xs, y), 0).predict(Qs);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
  }

  TEST_CASE("DT agrees with the exhaustive oracle on small instances") {
    const auto r = checks::tree_oracle(300, 12);
    INFO(r.detail);
    CHECK(r.pass);
  }

  TEST_CASE("DT on a constant target predicts the constant") {
    Rng rng(2);
    const auto X = random_matrix(rng, 20, 2);
    const auto m = train(config(Algorithm::DecisionTree), make_table(X, std::vector<double>(20, 4.5)), 0);
    for (double p : m.predict(random_matrix(rng, 5, 2))) CHECK(p == 4.5);
    const auto constant = Matrix(6, 2, 1.0);
    const auto c = train(config(Algorithm::DecisionTree), make_table(constant, std::vector<double>(6, -2.0)), 0);
    CHECK(c.predict(constant).front() == -2.0);
  }

  TEST_CASE("DT training error is non-increasing in depth") {
    Rng rng(21);
    const auto X = random_matrix(rng, 200, 3);
    std::vector<double> y(200);
    for (std::size_t i = 0; i < 200; ++i) y[i] = X(i, 0) * X(i, 1) + std::cos(X(i, 2)) + 0.2 * rng.normal();
    const auto table = make_table(X, y);
    double prev = INFINITY;
    for (int depth = 1; depth <= 10; ++depth) {
      const auto m = train(config(Algorithm::DecisionTree, {{"max_depth", std::to_string(depth)}}), table, 0);
      const double e = mse(m.predict(X), y);
      CHECK(e <= prev + 1e-12);
      prev = e;
    }
  }

  TEST_CASE("DT min_gain and min_leaf_size stop splits") {
    const auto X = Matrix::from_rows({{0}, {1}, {2}, {3}});
    const std::vector<double> y{0, 0, 10, 10};
    CHECK(RegressionTree::fit(X, y, {4, 0.0, 1}).leaf_count() == 2);
    CHECK(RegressionTree::fit(X, y, {4, 0.0, 3}).leaf_count() == 1);
    const std::vector<double> y2{0, 1, 10, 11};
    // Root split removes 100/101 of the variance; the child splits remove all of theirs.
    CHECK(RegressionTree::fit(X, y2, {4, 0.0, 1}).leaf_count() == 4);
    CHECK(RegressionTree::fit(X, y2, {1, 0.0, 1}).leaf_count() == 2);
    CHECK(RegressionTree::fit(X, y2, {4, 0.995, 1}).leaf_count() == 1);
    const auto root = RegressionTree::fit(X, y, {4, 0.0, 1}).nodes().front();
    CHECK(root.threshold == 1.5);
  }

  TEST_CASE("GBT with no trees predicts the training mean") {
    Rng rng(8);
    const auto X = random_matrix(rng, 40, 2);
    std::vector<double> y(40);
    for (auto& v : y) v = rng.uniform(-5, 50);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / 40.0;
    const auto m = train(config(Algorithm::GradientBoostedTrees, {{"n_trees", "0"}}), make_table(X, y), 0);
    for (double p : m.predict(random_matrix(rng, 8, 2))) CHECK(std::abs(p - mean) <= 1e-12);
  }

  TEST_CASE("a single full-rate stump recovers the leaf means") {
    const auto X = Matrix::from_rows({{0}, {1}, {2}, {3}});
    const auto m = train(config(Algorithm::GradientBoostedTrees,
                                {{"n_trees", "1"}, {"max_depth", "1"}, {"learning_rate", "1"}, {"n_bins", "4"}}),
                         make_table(X, {0, 0, 10, 10}), 0);
    const auto p = m.predict(X);
    for (std::size_t i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(i < 2 ? 0.0 : 10.0).epsilon(1e-12));
  }

  TEST_CASE("GBT training error never rises with more trees") {
    const auto r = checks::gbt_properties(77);
    INFO(r.detail);
    CHECK(r.pass);
  }

  TEST_CASE("bin mapper edges") {
    const auto X = Matrix::from_rows({{0, 5}, {10, 5}});
    const auto bins = BinMapper::fit(X, 5);
    CHECK(bins.bins(0) == 5);
    CHECK(bins.bins(1) == 1);
    CHECK(bins.bin(0, -3.0) == 0);
    CHECK(bins.bin(0, 4.0) == 2);
    CHECK(bins.bin(0, 10.0) == 4);
    CHECK(bins.bin(0, 99.0) == 4);
    CHECK(bins.upper_edge(0, 1) == doctest::Approx(4.0));
  }

  TEST_CASE("DL analytic gradients match finite differences") {
    for (auto act : {Activation::Tanh, Activation::Rectifier, Activation::ExpRectifier}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto r = checks::dl_gradient(act, seed, 1e-4);
        INFO(r.detail);
        CHECK(r.pass);
      }
    }
  }

  TEST_CASE("DL fits a smooth function better than the mean") {
    Rng rng(13);
    const auto X = random_matrix(rng, 300, 2);
    std::vector<double> y(300);
    for (std::size_t i = 0; i < 300; ++i) y[i] = 2.0 * X(i, 0) - X(i, 1) + 5.0;
    const auto m = train(config(Algorithm::DeepLearning, {{"epochs", "20"}}), make_table(X, y), 9);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / 300.0;
    CHECK(mse(m.predict(X), y) < 0.05 * mse(std::vector<double>(300, mean), y));
  }

  TEST_CASE("training is deterministic in config, data and seed") {
    Rng rng(17);
    const auto X = random_matrix(rng, 60, 3);
    std::vector<double> y(60);
    for (auto& v : y) v = rng.normal();
    const auto table = make_table(X, y);
    for (auto a : {Algorithm::Knn, Algorithm::DecisionTree, Algorithm::GradientBoostedTrees, Algorithm::DeepLearning}) {
      const auto p1 = train(config(a), table, 5).predict(X);
      const auto p2 = train(config(a), table, 5).predict(X);
      CHECK(p1 == p2);
    }
    const auto d1 = train(config(Algorithm::DeepLearning), table, 5).predict(X);
    const auto d2 = train(config(Algorithm::DeepLearning), table, 6).predict(X);
    CHECK(d1 != d2);
  }

  TEST_CASE("shape and finiteness errors") {
    const auto X = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    const auto m = train(config(Algorithm::Knn), make_table(X, {1, 2, 3}), 0);
    CHECK_THROWS_AS(m.predict(Matrix::from_rows({{1}})), FeatureShapeError);
    CHECK_THROWS_AS(m.predict(Matrix::from_rows({{1, NAN}})), NonFiniteDataError);
    CHECK_THROWS_AS(train(config(Algorithm::DecisionTree), make_table(X, {1, NAN, 3}), 0), NonFiniteDataError);
    CHECK_THROWS_AS(train(config(Algorithm::DecisionTree), make_table(Matrix(0, 2), {}), 0), ShapeError);
  }

  TEST_CASE("model dump carries a versioned header and the fitted state") {
    const auto X = Matrix::from_rows({{0}, {1}, {2}, {3}});
    for (auto a : {Algorithm::Knn, Algorithm::DecisionTree, Algorithm::GradientBoostedTrees, Algorithm::DeepLearning}) {
      const auto m = train(config(a), make_table(X, {0, 1, 2, 3}), 1);
      std::ostringstream out;
      m.dump(out);
      const auto text = out.str();
      CHECK(text.rfind(kModelDumpVersion, 0) == 0);
      CHECK(text.find("f0") != std::string::npos);
      CHECK(text.find(std::string("algorithm ") + std::string(algorithm_name(a))) != std::string::npos);
    }
  }
}
