#pragma once

// Fully connected network over a flat parameter buffer. Hidden layers use
// tanh, the output layer is linear. Samples are columns.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "affectively/core/errors.hpp"
#include "affectively/core/rng.hpp"

namespace affectively::agents {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw ConfigError("mlp: need at least input and output sizes");
    for (int s : sizes_) {
      if (s < 1) throw ConfigError("mlp: layer sizes must be >= 1");
    }
    offsets_.push_back(0);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      offsets_.push_back(offsets_.back() + static_cast<std::size_t>(sizes_[l + 1]) * (sizes_[l] + 1));
    }
  }

  struct Cache {
    std::vector<Matrix> activations;  // input, then each hidden layer's tanh output
  };

  std::size_t param_count() const { return offsets_.empty() ? 0 : offsets_.back(); }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t layer_count() const { return sizes_.size() - 1; }

  Matrix forward(const Matrix& x, const double* params, Cache* cache = nullptr) const {
    if (x.rows() != input_size()) throw TrainingError("mlp: input has wrong size");
    Matrix a = x;
    if (cache) {
      cache->activations.clear();
      cache->activations.push_back(x);
    }
    for (std::size_t l = 0; l < layer_count(); ++l) {
      Matrix z = weights(params, l) * a;
      z.colwise() += bias(params, l);
      if (l + 1 == layer_count()) return z;
      a = z.array().tanh().matrix();
      if (cache) cache->activations.push_back(a);
    }
    return a;
  }

  // Adds dLoss/dparams for the output gradient d_out into grad.
  void backward(const Cache& cache, const Matrix& d_out, const double* params, double* grad) const {
    Matrix dz = d_out;
    for (std::size_t l = layer_count(); l-- > 0;) {
      const Matrix& a = cache.activations[l];
      weights_mut(grad, l).noalias() += dz * a.transpose();
      bias_mut(grad, l) += dz.rowwise().sum();
      if (l == 0) break;
      Matrix da = weights(params, l).transpose() * dz;
      dz = (da.array() * (1.0 - a.array().square())).matrix();
    }
  }

  // Orthogonal weights scaled by gain (hidden_gain for hidden layers,
  // output_gain for the last), zero biases.
  void init(double* params, Rng& rng, double hidden_gain, double output_gain) const {
    for (std::size_t l = 0; l < layer_count(); ++l) {
      const int out = sizes_[l + 1];
      const int in = sizes_[l];
      const double gain = l + 1 == layer_count() ? output_gain : hidden_gain;
      weights_mut(params, l) = gain * orthogonal(out, in, rng);
      bias_mut(params, l).setZero();
    }
  }

  static Matrix orthogonal(int rows, int cols, Rng& rng) {
    const bool tall = rows >= cols;
    const int m = tall ? rows : cols;
    const int n = tall ? cols : rows;
    Matrix a(m, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < m; ++i) a(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(m, n);
    const Matrix r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    if (tall) return q;
    return q.transpose();
  }

 private:
  Eigen::Map<const Matrix> weights(const double* p, std::size_t l) const {
    return {p + offsets_[l], sizes_[l + 1], sizes_[l]};
  }
  Eigen::Map<const Vector> bias(const double* p, std::size_t l) const {
    return {p + offsets_[l] + static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l], sizes_[l + 1]};
  }
  Eigen::Map<Matrix> weights_mut(double* p, std::size_t l) const { return {p + offsets_[l], sizes_[l + 1], sizes_[l]}; }
  Eigen::Map<Vector> bias_mut(double* p, std::size_t l) const {
    return {p + offsets_[l] + static_cast<std::size_t>(sizes_[l + 1]) * sizes_[l], sizes_[l + 1]};
  }

  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
};

}  // namespace affectively::agents
