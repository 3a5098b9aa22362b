#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ccadm/matrix.hpp"

namespace ccadm {

/// Per-feature (mean, population stddev) fitted on training rows. A constant
/// feature keeps scale 1 so it maps to zero everywhere on the training set.
class Standardizer {
 public:
  Standardizer() = default;
  static Standardizer fit(const Matrix& X);

  void apply(std::span<const double> in, std::span<double> out) const;
  Matrix apply(const Matrix& X) const;

  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& scales() const noexcept { return scales_; }

  void dump(std::ostream& out) const;

 private:
  std::vector<double> means_;
  std::vector<double> scales_;
};

}  // namespace ccadm
