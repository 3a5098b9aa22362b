#include "ccadm/learners/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "ccadm/errors.hpp"
#include "ccadm/rng.hpp"
#include "ccadm/text.hpp"

namespace ccadm {

Mlp::Mlp(std::vector<std::size_t> layer_sizes, Activation activation, Rng& rng)
    : sizes_(std::move(layer_sizes)), activation_(activation) {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(sizes_[l]));
    const std::size_t n_weights = sizes_[l + 1] * sizes_[l];
    for (std::size_t k = 0; k < n_weights; ++k) params_[offsets_[l] + k] = rng.uniform(-limit, limit);
  }
}

double Mlp::activate(double z) const {
  switch (activation_) {
    case Activation::Rectifier:
      return z > 0.0 ? z : 0.0;
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::ExpRectifier:
      return z > 0.0 ? z : std::expm1(z);
  }
  return z;
}

double Mlp::derivative(double z) const {
  switch (activation_) {
    case Activation::Rectifier:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::ExpRectifier:
      return z > 0.0 ? 1.0 : std::exp(z);
  }
  return 1.0;
}

double Mlp::predict_row(std::span<const double> x) const {
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> next;
  const std::size_t layers = sizes_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + in * out;
    next.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = b[o];
      for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * a[i];
      next[o] = l + 1 < layers ? activate(z) : z;
    }
    a.swap(next);
  }
  return a[0];
}

double Mlp::loss_and_gradient(const Matrix& X, std::span<const double> y, std::span<const std::size_t> rows,
                              std::vector<double>& grad) const {
  grad.assign(params_.size(), 0.0);
  const std::size_t layers = sizes_.size() - 1;
  std::vector<std::vector<double>> pre(layers);   // z per layer
  std::vector<std::vector<double>> post(layers + 1);  // activations, post[0] = input
  std::vector<double> delta;
  std::vector<double> prev_delta;
  double loss = 0.0;
  const double scale = 1.0 / static_cast<double>(rows.size());

  for (std::size_t r : rows) {
    auto x = X.row(r);
    post[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t in = sizes_[l];
      const std::size_t out = sizes_[l + 1];
      const double* w = params_.data() + offsets_[l];
      const double* b = w + in * out;
      pre[l].assign(out, 0.0);
      post[l + 1].assign(out, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        double z = b[o];
        for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * post[l][i];
        pre[l][o] = z;
        post[l + 1][o] = l + 1 < layers ? activate(z) : z;
      }
    }
    const double err = post[layers][0] - y[r];
    loss += 0.5 * err * err * scale;

    delta.assign(1, err * scale);
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = sizes_[l];
      const std::size_t out = sizes_[l + 1];
      const double* w = params_.data() + offsets_[l];
      double* gw = grad.data() + offsets_[l];
      double* gb = gw + in * out;
      for (std::size_t o = 0; o < out; ++o) {
        gb[o] += delta[o];
        for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * post[l][i];
      }
      if (l == 0) break;
      prev_delta.assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        double s = 0.0;
        for (std::size_t o = 0; o < out; ++o) s += w[o * in + i] * delta[o];
        prev_delta[i] = s * derivative(pre[l - 1][i]);
      }
      delta.swap(prev_delta);
    }
  }
  return loss;
}

double Mlp::loss(const Matrix& X, std::span<const double> y) const {
  double total = 0.0;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const double err = predict_row(X.row(r)) - y[r];
    total += 0.5 * err * err;
  }
  return total / static_cast<double>(X.rows());
}

void Mlp::dump(std::ostream& out) const {
  out << "network activation=" << activation_name(activation_) << " layers=";
  for (std::size_t l = 0; l < sizes_.size(); ++l) out << (l ? "x" : "") << sizes_[l];
  out << '\n';
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t in = sizes_[l];
    const std::size_t out_n = sizes_[l + 1];
    const double* w = params_.data() + offsets_[l];
    out << "  layer " << l << " weights " << out_n << "x" << in << '\n';
    for (std::size_t o = 0; o < out_n; ++o) {
      out << "   ";
      for (std::size_t i = 0; i < in; ++i) out << ' ' << text::format_real(w[o * in + i]);
      out << '\n';
    }
    out << "  layer " << l << " bias";
    for (std::size_t o = 0; o < out_n; ++o) out << ' ' << text::format_real(w[in * out_n + o]);
    out << '\n';
  }
}

namespace {

std::vector<std::size_t> topology(std::size_t inputs, const std::vector<int>& hidden) {
  std::vector<std::size_t> sizes{inputs};
  for (int h : hidden) sizes.push_back(static_cast<std::size_t>(h));
  sizes.push_back(1);
  return sizes;
}

}  // namespace

DlRegressor::DlRegressor(const Matrix& X, std::span<const double> y, const DlParams& params, std::uint64_t seed)
    : standardizer_(Standardizer::fit(X)),
      net_([&]() {
        Rng init(seed);
        return Mlp(topology(X.cols(), params.hidden_layers), params.activation, init);
      }()) {
  const std::size_t n = X.rows();
  y_mean_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : y) ss += (v - y_mean_) * (v - y_mean_);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  y_scale_ = sd > 0.0 ? sd : 1.0;

  const Matrix Z = standardizer_.apply(X);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = (y[i] - y_mean_) / y_scale_;

  // Separate stream from the initializer so shuffling does not shift weights.
  Rng order_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad;
  auto& w = net_.parameters();
  const auto batch = static_cast<std::size_t>(params.batch_size);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      net_.loss_and_gradient(Z, t, std::span<const std::size_t>(order.data() + start, end - start), grad);
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= params.learning_rate * grad[k];
    }
    for (double v : w) {
      if (!std::isfinite(v))
        throw NonFiniteDataError("network training diverged (non-finite weights); lower learning_rate");
    }
  }
}

double DlRegressor::predict_row(std::span<const double> x) const {
  std::vector<double> z(x.size());
  standardizer_.apply(x, z);
  return y_mean_ + y_scale_ * net_.predict_row(z);
}

void DlRegressor::dump(std::ostream& out) const {
  standardizer_.dump(out);
  out << "target mean=" << text::format_real(y_mean_) << " scale=" << text::format_real(y_scale_) << '\n';
  net_.dump(out);
}

}  // namespace ccadm
