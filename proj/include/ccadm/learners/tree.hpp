#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ccadm/learners/config.hpp"
#include "ccadm/matrix.hpp"

namespace ccadm {

/// Binary regression tree node. Examples with `x[feature] <= threshold` go
/// left. Leaves have `feature < 0`.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  double value = 0.0;
  std::size_t count = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Regression tree grown greedily by variance reduction with an exhaustive
/// threshold search over midpoints of sorted unique feature values.
///
/// A node at depth d (root 0) is split only if d < max_depth, both children
/// hold at least min_leaf_size examples, and the best split removes at least
/// min_gain of the node's sum of squared deviations (and more than zero).
/// Ties between candidate splits (gains within 1e-10 of the node's sum of
/// squares) keep the lowest feature, then the lowest threshold. Leaves
/// predict the mean of their targets.
class RegressionTree {
 public:
  static RegressionTree fit(const Matrix& X, std::span<const double> y, const TreeParams& params);

  double predict_row(std::span<const double> x) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  void dump(std::ostream& out, const std::vector<std::string>& feature_names = {}) const;

 private:
  std::vector<TreeNode> nodes_;
};

/// Writes nodes one per line, indented by depth.
void dump_tree_nodes(std::ostream& out, const std::vector<TreeNode>& nodes,
                     const std::vector<std::string>& feature_names);

}  // namespace ccadm
