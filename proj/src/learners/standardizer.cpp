#include "ccadm/learners/standardizer.hpp"

#include <cmath>
#include <ostream>

#include "ccadm/text.hpp"

namespace ccadm {

Standardizer Standardizer::fit(const Matrix& X) {
  Standardizer s;
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  s.means_.assign(d, 0.0);
  s.scales_.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += X(i, j);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (X(i, j) - mean) * (X(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.means_[j] = mean;
    s.scales_[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - means_[j]) / scales_[j];
}

Matrix Standardizer::apply(const Matrix& X) const {
  Matrix out(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i) apply(X.row(i), out.row(i));
  return out;
}

void Standardizer::dump(std::ostream& out) const {
  out << "standardization " << means_.size() << '\n';
  for (std::size_t j = 0; j < means_.size(); ++j)
    out << "  " << j << ' ' << text::format_real(means_[j]) << ' ' << text::format_real(scales_[j]) << '\n';
}

}  // namespace ccadm
