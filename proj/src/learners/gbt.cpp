#include "ccadm/learners/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ccadm/text.hpp"

namespace ccadm {

BinMapper BinMapper::fit(const Matrix& X, int n_bins) {
  BinMapper m;
  m.n_bins_ = n_bins;
  const std::size_t d = X.cols();
  m.mins_.assign(d, 0.0);
  m.widths_.assign(d, 0.0);
  m.constant_.assign(d, true);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = X(0, j);
    double hi = X(0, j);
    for (std::size_t i = 1; i < X.rows(); ++i) {
      lo = std::min(lo, X(i, j));
      hi = std::max(hi, X(i, j));
    }
    m.mins_[j] = lo;
    m.widths_[j] = (hi - lo) / static_cast<double>(n_bins);
    m.constant_[j] = !(m.widths_[j] > 0.0);
  }
  return m;
}

std::uint16_t BinMapper::bin(std::size_t feature, double x) const {
  if (constant_[feature]) return 0;
  const double pos = std::floor((x - mins_[feature]) / widths_[feature]);
  if (!(pos > 0.0)) return 0;
  const double last = static_cast<double>(n_bins_ - 1);
  return static_cast<std::uint16_t>(std::min(pos, last));
}

double BinMapper::upper_edge(std::size_t feature, std::size_t b) const {
  return mins_[feature] + static_cast<double>(b + 1) * widths_[feature];
}

std::vector<std::uint16_t> BinMapper::transform(std::span<const double> x) const {
  std::vector<std::uint16_t> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = bin(j, x[j]);
  return out;
}

class HistogramTreeBuilder {
 public:
  using Node = GbtRegressor::BinnedNode;

  HistogramTreeBuilder(const std::vector<std::uint16_t>& binned, std::size_t n_features, const BinMapper& mapper,
                       int max_depth)
      : binned_(binned), d_(n_features), mapper_(mapper), max_depth_(max_depth) {}

  std::vector<Node> build(std::span<const double> residuals) {
    residuals_ = residuals;
    nodes_.clear();
    std::vector<std::size_t> idx(residuals.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    grow(idx, 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(const std::vector<std::size_t>& idx, int depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    double sum = 0.0;
    for (std::size_t i : idx) sum += residuals_[i];
    const double n = static_cast<double>(idx.size());
    nodes_[id].value = sum / n;
    nodes_[id].count = idx.size();
    if (depth >= max_depth_ || idx.size() < 2) return id;

    int best_feature = -1;
    std::uint16_t best_bin = 0;
    double best_gain = 0.0;
    const double parent_score = sum * sum / n;
    std::vector<double> bin_sum;
    std::vector<std::size_t> bin_count;
    for (std::size_t f = 0; f < d_; ++f) {
      const std::size_t nb = mapper_.bins(f);
      if (nb < 2) continue;
      bin_sum.assign(nb, 0.0);
      bin_count.assign(nb, 0);
      for (std::size_t i : idx) {
        const auto b = binned_[i * d_ + f];
        bin_sum[b] += residuals_[i];
        ++bin_count[b];
      }
      double left_sum = 0.0;
      std::size_t left_n = 0;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        left_sum += bin_sum[b];
        left_n += bin_count[b];
        const std::size_t right_n = idx.size() - left_n;
        if (left_n == 0 || right_n == 0 || bin_count[b] == 0) continue;
        const double right_sum = sum - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(left_n) +
                            right_sum * right_sum / static_cast<double>(right_n) - parent_score;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_bin = static_cast<std::uint16_t>(b);
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    const auto bf = static_cast<std::size_t>(best_feature);
    for (std::size_t i : idx) (binned_[i * d_ + bf] <= best_bin ? left : right).push_back(i);
    nodes_[id].feature = best_feature;
    nodes_[id].bin = best_bin;
    const std::size_t l = grow(left, depth + 1);
    const std::size_t r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  const std::vector<std::uint16_t>& binned_;
  std::size_t d_;
  const BinMapper& mapper_;
  int max_depth_;
  std::span<const double> residuals_;
  std::vector<Node> nodes_;
};

GbtRegressor::GbtRegressor(const Matrix& X, std::span<const double> y, const GbtParams& params)
    : params_(params), mapper_(BinMapper::fit(X, params.n_bins)) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  base_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

  std::vector<std::uint16_t> binned(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) binned[i * d + j] = mapper_.bin(j, X(i, j));
  }

  std::vector<double> tree_sum(n, 0.0);
  std::vector<double> residuals(n);
  HistogramTreeBuilder builder(binned, d, mapper_, params_.max_depth);
  for (int t = 0; t < params_.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) residuals[i] = y[i] - (base_ + params_.learning_rate * tree_sum[i]);
    trees_.push_back(builder.build(residuals));
    for (std::size_t i = 0; i < n; ++i)
      tree_sum[i] += tree_output(trees_.back(), std::span<const std::uint16_t>(binned.data() + i * d, d));
  }
}

double GbtRegressor::tree_output(const BinnedTree& tree, std::span<const std::uint16_t> bins) {
  std::size_t id = 0;
  while (tree[id].feature >= 0) {
    const auto& node = tree[id];
    id = bins[static_cast<std::size_t>(node.feature)] <= node.bin ? node.left : node.right;
  }
  return tree[id].value;
}

double GbtRegressor::predict_row(std::span<const double> x) const {
  const auto bins = mapper_.transform(x);
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree_output(tree, bins);
  return base_ + params_.learning_rate * sum;
}

void GbtRegressor::dump(std::ostream& out, const std::vector<std::string>& feature_names) const {
  out << "gbt base=" << text::format_real(base_) << " learning_rate=" << text::format_real(params_.learning_rate)
      << " trees=" << trees_.size() << " bins=" << params_.n_bins << '\n';
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    // Present the binned splits as plain thresholds on the upper bin edge.
    std::vector<TreeNode> plain;
    plain.reserve(trees_[t].size());
    for (const auto& node : trees_[t]) {
      TreeNode p;
      p.feature = node.feature;
      p.left = node.left;
      p.right = node.right;
      p.value = node.value;
      p.count = node.count;
      if (node.feature >= 0) p.threshold = mapper_.upper_edge(static_cast<std::size_t>(node.feature), node.bin);
      plain.push_back(p);
    }
    out << "tree " << t << " nodes=" << plain.size() << '\n';
    dump_tree_nodes(out, plain, feature_names);
  }
}

}  // namespace ccadm
