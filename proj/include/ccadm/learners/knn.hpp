#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ccadm/learners/config.hpp"
#include "ccadm/learners/standardizer.hpp"
#include "ccadm/matrix.hpp"

namespace ccadm {

/// k-nearest-neighbour regression on standardized features. Prediction is
/// the unweighted mean of the k nearest training targets; equal distances
/// are ordered by training index. k larger than the training set uses every
/// example.
class KnnRegressor {
 public:
  KnnRegressor(const Matrix& X, std::span<const double> y, const KnnParams& params);

  /// Training indices of the k nearest examples, nearest first.
  std::vector<std::size_t> neighbors(std::span<const double> x) const;
  double predict_row(std::span<const double> x) const;

  const Standardizer& standardizer() const noexcept { return standardizer_; }
  void dump(std::ostream& out) const;

 private:
  std::size_t k_;
  Standardizer standardizer_;
  Matrix train_;
  std::vector<double> targets_;
};

}  // namespace ccadm
