#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ccadm/learners/config.hpp"
#include "ccadm/learners/tree.hpp"
#include "ccadm/matrix.hpp"

namespace ccadm {

/// Equal-width bins per feature between the training minimum and maximum.
/// Values outside the training range fall into the first or last bin.
class BinMapper {
 public:
  static BinMapper fit(const Matrix& X, int n_bins);

  std::uint16_t bin(std::size_t feature, double x) const;
  /// Upper edge of bin `b` of `feature` (the split threshold for "bin <= b").
  double upper_edge(std::size_t feature, std::size_t b) const;
  /// Features whose training values are all equal get a single bin.
  std::size_t bins(std::size_t feature) const { return constant_[feature] ? 1 : static_cast<std::size_t>(n_bins_); }
  std::size_t features() const noexcept { return mins_.size(); }

  std::vector<std::uint16_t> transform(std::span<const double> x) const;

 private:
  int n_bins_ = 2;
  std::vector<double> mins_;
  std::vector<double> widths_;
  std::vector<bool> constant_;
};

/// Gradient-boosted regression trees under squared loss.
///
/// Starts from the training mean; each stage fits a depth-limited tree to the
/// current residuals using histogram split candidates, and the model predicts
/// mean + learning_rate * (sum of tree outputs).
class GbtRegressor {
 public:
  GbtRegressor(const Matrix& X, std::span<const double> y, const GbtParams& params);

  double predict_row(std::span<const double> x) const;

  double base() const noexcept { return base_; }
  std::size_t tree_count() const noexcept { return trees_.size(); }
  void dump(std::ostream& out, const std::vector<std::string>& feature_names = {}) const;

 private:
  struct BinnedNode {
    int feature = -1;
    std::uint16_t bin = 0;
    std::size_t left = 0;
    std::size_t right = 0;
    double value = 0.0;
    std::size_t count = 0;
  };
  using BinnedTree = std::vector<BinnedNode>;

  static double tree_output(const BinnedTree& tree, std::span<const std::uint16_t> bins);

  GbtParams params_;
  BinMapper mapper_;
  double base_ = 0.0;
  std::vector<BinnedTree> trees_;

  friend class HistogramTreeBuilder;
};

}  // namespace ccadm
