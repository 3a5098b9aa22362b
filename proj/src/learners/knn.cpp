#include "ccadm/learners/knn.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "ccadm/text.hpp"

namespace ccadm {

KnnRegressor::KnnRegressor(const Matrix& X, std::span<const double> y, const KnnParams& params)
    : k_(std::min<std::size_t>(static_cast<std::size_t>(params.k), X.rows())),
      standardizer_(Standardizer::fit(X)),
      train_(standardizer_.apply(X)),
      targets_(y.begin(), y.end()) {}

std::vector<std::size_t> KnnRegressor::neighbors(std::span<const double> x) const {
  std::vector<double> q(x.size());
  standardizer_.apply(x, q);
  const std::size_t n = train_.rows();
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = train_.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) d += (row[j] - q[j]) * (row[j] - q[j]);
    dist[i] = d;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto closer = [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_), order.end(), closer);
  order.resize(k_);
  return order;
}

double KnnRegressor::predict_row(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t i : neighbors(x)) sum += targets_[i];
  return sum / static_cast<double>(k_);
}

void KnnRegressor::dump(std::ostream& out) const {
  out << "knn k=" << k_ << " examples=" << targets_.size() << '\n';
  standardizer_.dump(out);
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    out << "  example " << i << " target=" << text::format_real(targets_[i]) << " x=";
    auto row = train_.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << text::format_real(row[j]);
    out << '\n';
  }
}

}  // namespace ccadm
