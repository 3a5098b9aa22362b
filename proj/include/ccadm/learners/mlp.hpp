#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ccadm/learners/config.hpp"
#include "ccadm/learners/standardizer.hpp"
#include "ccadm/matrix.hpp"

namespace ccadm {

class Rng;

/// Fully connected network with a single linear output.
///
/// Parameters live in one flat vector: for each layer, the weight matrix
/// (outputs x inputs, row-major) followed by its bias vector.
class Mlp {
 public:
  /// `layer_sizes` runs from the input width to the output width (1). Weights
  /// are drawn uniformly from +-sqrt(6 / fan_in); biases start at zero.
  Mlp(std::vector<std::size_t> layer_sizes, Activation activation, Rng& rng);

  double predict_row(std::span<const double> x) const;

  /// Loss 0.5 * mean((f(x) - y)^2) over `rows`, and its gradient with respect
  /// to every parameter (written to `grad`, resized as needed).
  double loss_and_gradient(const Matrix& X, std::span<const double> y, std::span<const std::size_t> rows,
                           std::vector<double>& grad) const;
  double loss(const Matrix& X, std::span<const double> y) const;

  std::vector<double>& parameters() noexcept { return params_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }

  void dump(std::ostream& out) const;

 private:
  double activate(double z) const;
  double derivative(double z) const;

  std::vector<std::size_t> sizes_;
  Activation activation_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights
};

/// Standardizes inputs and target, then runs mini-batch SGD with a fixed
/// step for `epochs` shuffled passes. All randomness comes from `seed`.
class DlRegressor {
 public:
  DlRegressor(const Matrix& X, std::span<const double> y, const DlParams& params, std::uint64_t seed);

  double predict_row(std::span<const double> x) const;
  const Mlp& network() const noexcept { return net_; }
  void dump(std::ostream& out) const;

 private:
  Standardizer standardizer_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  Mlp net_;
};

}  // namespace ccadm
