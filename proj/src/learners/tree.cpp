#include "ccadm/learners/tree.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "ccadm/text.hpp"

namespace ccadm {

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  std::size_t left_count = 0;
};

class ExactBuilder {
 public:
  ExactBuilder(const Matrix& X, std::span<const double> y, const TreeParams& params)
      : X_(X), y_(y), params_(params) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> idx(X_.rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    grow(idx, 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t>& idx, int depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    double sum = 0.0;
    for (std::size_t i : idx) sum += y_[i];
    const double mean = sum / static_cast<double>(idx.size());
    double sse = 0.0;
    for (std::size_t i : idx) sse += (y_[i] - mean) * (y_[i] - mean);
    nodes_[id].value = mean;
    nodes_[id].count = idx.size();

    if (depth >= params_.max_depth || sse <= 0.0) return id;
    const auto min_leaf = static_cast<std::size_t>(params_.min_leaf_size);
    if (idx.size() < 2 * min_leaf) return id;

    SplitChoice best = best_split(idx, mean, sse, min_leaf);
    if (best.feature < 0 || !(best.gain > 0.0) || best.gain / sse < params_.min_gain) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : idx) {
      (X_(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(i);
    }
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    const std::size_t l = grow(left, depth + 1);
    const std::size_t r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  SplitChoice best_split(const std::vector<std::size_t>& idx, double mean, double sse, std::size_t min_leaf) const {
    SplitChoice best;
    const std::size_t n = idx.size();
    // Gains this close are the same partition quality up to rounding; the
    // earlier candidate wins.
    const double tie_tolerance = 1e-10 * sse;
    std::vector<std::size_t> order(idx);
    for (std::size_t f = 0; f < X_.cols(); ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return X_(a, f) < X_(b, f); });
      // Centred running sums keep the SSE arithmetic well conditioned.
      double total = 0.0;
      double total_sq = 0.0;
      for (std::size_t i : order) {
        const double d = y_[i] - mean;
        total += d;
        total_sq += d * d;
      }
      double left_sum = 0.0;
      double left_sq = 0.0;
      for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        const double d = y_[order[pos]] - mean;
        left_sum += d;
        left_sq += d * d;
        const double a = X_(order[pos], f);
        const double b = X_(order[pos + 1], f);
        if (a == b) continue;
        const std::size_t nl = pos + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double right_sum = total - left_sum;
        const double right_sq = total_sq - left_sq;
        const double sse_l = left_sq - left_sum * left_sum / static_cast<double>(nl);
        const double sse_r = right_sq - right_sum * right_sum / static_cast<double>(nr);
        const double gain = sse - (sse_l + sse_r);
        if (gain > best.gain + tie_tolerance) {
          double mid = a + (b - a) / 2.0;
          if (!(mid < b)) mid = a;
          best = {static_cast<int>(f), mid, gain, nl};
        }
      }
    }
    return best;
  }

  const Matrix& X_;
  std::span<const double> y_;
  TreeParams params_;
  std::vector<TreeNode> nodes_;
};

std::size_t depth_of(const std::vector<TreeNode>& nodes, std::size_t id) {
  if (nodes[id].is_leaf()) return 0;
  return 1 + std::max(depth_of(nodes, nodes[id].left), depth_of(nodes, nodes[id].right));
}

void dump_node(std::ostream& out, const std::vector<TreeNode>& nodes, std::size_t id, std::size_t depth,
               const std::vector<std::string>& names) {
  const auto& node = nodes[id];
  out << std::string(2 * (depth + 1), ' ');
  if (node.is_leaf()) {
    out << "leaf value=" << text::format_real(node.value) << " n=" << node.count << '\n';
    return;
  }
  const auto f = static_cast<std::size_t>(node.feature);
  out << "split " << (f < names.size() ? names[f] : "f" + std::to_string(f))
      << " <= " << text::format_real(node.threshold) << " n=" << node.count << '\n';
  dump_node(out, nodes, node.left, depth + 1, names);
  dump_node(out, nodes, node.right, depth + 1, names);
}

}  // namespace

RegressionTree RegressionTree::fit(const Matrix& X, std::span<const double> y, const TreeParams& params) {
  RegressionTree t;
  t.nodes_ = ExactBuilder(X, y, params).build();
  return t;
}

double RegressionTree::predict_row(std::span<const double> x) const {
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const auto& node = nodes_[id];
    id = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[id].value;
}

std::size_t RegressionTree::depth() const { return depth_of(nodes_, 0); }

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

void RegressionTree::dump(std::ostream& out, const std::vector<std::string>& feature_names) const {
  out << "tree nodes=" << nodes_.size() << '\n';
  dump_tree_nodes(out, nodes_, feature_names);
}

void dump_tree_nodes(std::ostream& out, const std::vector<TreeNode>& nodes, const std::vector<std::string>& names) {
  if (!nodes.empty()) dump_node(out, nodes, 0, 0, names);
}

}  // namespace ccadm
