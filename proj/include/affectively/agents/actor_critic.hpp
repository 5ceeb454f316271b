#pragma once

// Separate policy and value MLPs plus a state-independent log-stddev per
// continuous slot. Policy head layout: the logits of every discrete branch in
// order, then one Gaussian mean per continuous slot. Continuous actions are
// tanh(u) with u ~ N(mean, exp(log_std)^2); log-probs include the tanh
// change-of-variables term.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "affectively/agents/mlp.hpp"
#include "affectively/core/spaces.hpp"

namespace affectively::agents {

// log(1 - tanh(u)^2), stable for large |u|.
inline double log_one_minus_tanh_sq(double u) {
  const double x = -2.0 * u;
  const double softplus = std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
  return 2.0 * (std::numbers::ln2 - u - softplus);
}

struct PolicySample {
  Action action;
  std::vector<double> pre_squash;  // u, one per continuous slot
  double log_prob = 0.0;
  double value = 0.0;
};

class ActorCritic {
 public:
  ActorCritic() = default;
  ActorCritic(int obs_dim, ActionSpec spec, std::vector<int> hidden = {64, 64})
      : obs_dim_(obs_dim), spec_(std::move(spec)), hidden_(std::move(hidden)) {
    validate_spec(spec_);
    logit_count_ = std::accumulate(spec_.discrete_branches.begin(), spec_.discrete_branches.end(), 0);
    std::vector<int> pi{obs_dim_};
    pi.insert(pi.end(), hidden_.begin(), hidden_.end());
    std::vector<int> vf = pi;
    pi.push_back(logit_count_ + spec_.continuous_count);
    vf.push_back(1);
    pi_ = Mlp(pi);
    vf_ = Mlp(vf);
    params_.assign(pi_.param_count() + vf_.param_count() + static_cast<std::size_t>(spec_.continuous_count), 0.0);
  }

  void init(Rng& rng) {
    pi_.init(pi_params(), rng, std::sqrt(2.0), 0.01);
    vf_.init(vf_params(), rng, std::sqrt(2.0), 1.0);
    for (int c = 0; c < spec_.continuous_count; ++c) log_std()[c] = 0.0;
  }

  int obs_dim() const { return obs_dim_; }
  const ActionSpec& spec() const { return spec_; }
  const std::vector<int>& hidden() const { return hidden_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  double* pi_params() { return params_.data(); }
  const double* pi_params() const { return params_.data(); }
  double* vf_params() { return params_.data() + pi_.param_count(); }
  const double* vf_params() const { return params_.data() + pi_.param_count(); }
  double* log_std() { return vf_params() + vf_.param_count(); }
  const double* log_std() const { return vf_params() + vf_.param_count(); }

  PolicySample act(const std::vector<double>& obs, Rng& rng) const {
    check_obs(obs);
    const Eigen::Map<const Matrix> x(obs.data(), obs_dim_, 1);
    const Matrix out = pi_.forward(x, pi_params());
    PolicySample s;
    int row = 0;
    for (int n : spec_.discrete_branches) {
      const Vector p = softmax(out.col(0).segment(row, n));
      const double u = rng.uniform();
      int choice = n - 1;
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc += p[j];
        if (u < acc) {
          choice = j;
          break;
        }
      }
      s.action.discrete.push_back(choice);
      row += n;
    }
    for (int c = 0; c < spec_.continuous_count; ++c) {
      const double u = out(row + c, 0) + std::exp(log_std()[c]) * rng.normal();
      s.pre_squash.push_back(u);
      s.action.continuous.push_back(std::tanh(u));
    }
    s.log_prob = log_prob_column(out.col(0), s.action.discrete.data(), s.pre_squash.data());
    s.value = vf_.forward(x, vf_params())(0, 0);
    return s;
  }

  // Most likely action: argmax per branch, tanh of each mean.
  Action act_deterministic(const std::vector<double>& obs) const {
    check_obs(obs);
    const Eigen::Map<const Matrix> x(obs.data(), obs_dim_, 1);
    const Matrix out = pi_.forward(x, pi_params());
    Action a;
    int row = 0;
    for (int n : spec_.discrete_branches) {
      Eigen::Index best = 0;
      out.col(0).segment(row, n).maxCoeff(&best);
      a.discrete.push_back(static_cast<int>(best));
      row += n;
    }
    for (int c = 0; c < spec_.continuous_count; ++c) a.continuous.push_back(std::tanh(out(row + c, 0)));
    return a;
  }

  double value(const std::vector<double>& obs) const {
    check_obs(obs);
    const Eigen::Map<const Matrix> x(obs.data(), obs_dim_, 1);
    return vf_.forward(x, vf_params())(0, 0);
  }

  // Evaluation of a batch of (obs, action) pairs, kept for backward().
  struct Batch {
    Matrix obs;                // obs_dim x B
    std::vector<int> discrete; // B x branches, row-major
    Matrix pre_squash;         // continuous x B
  };

  struct Evaluation {
    Vector log_prob;
    Vector entropy;
    Vector value;
    Matrix pi_out;
    std::vector<Matrix> probs;  // per branch, n x B
    Matrix branch_entropy;      // branches x B
    Mlp::Cache pi_cache;
    Mlp::Cache vf_cache;
  };

  Evaluation evaluate(const Batch& b) const {
    const Eigen::Index n = b.obs.cols();
    const std::size_t nb = spec_.discrete_branches.size();
    Evaluation e;
    e.pi_out = pi_.forward(b.obs, pi_params(), &e.pi_cache);
    e.value = vf_.forward(b.obs, vf_params(), &e.vf_cache).row(0).transpose();
    e.log_prob = Vector::Zero(n);
    e.entropy = Vector::Zero(n);
    e.branch_entropy = Matrix::Zero(static_cast<Eigen::Index>(nb), n);
    int row = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      const int m = spec_.discrete_branches[k];
      Matrix p(m, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto z = e.pi_out.col(i).segment(row, m);
        const double lse = log_sum_exp(z);
        double h = 0.0;
        for (int j = 0; j < m; ++j) {
          const double lp = z[j] - lse;
          p(j, i) = std::exp(lp);
          h -= p(j, i) * lp;
        }
        e.log_prob[i] += z[b.discrete[static_cast<std::size_t>(i) * nb + k]] - lse;
        e.branch_entropy(static_cast<Eigen::Index>(k), i) = h;
        e.entropy[i] += h;
      }
      e.probs.push_back(std::move(p));
      row += m;
    }
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    for (int c = 0; c < spec_.continuous_count; ++c) {
      const double ls = log_std()[c];
      const double sigma = std::exp(ls);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double u = b.pre_squash(c, i);
        const double z = (u - e.pi_out(row + c, i)) / sigma;
        e.log_prob[i] += -0.5 * z * z - ls - half_log_2pi - log_one_minus_tanh_sq(u);
        e.entropy[i] += ls + 0.5 + half_log_2pi;
      }
    }
    return e;
  }

  // Adds dLoss/dparams into grad given the loss gradient with respect to
  // each sample's log-prob, entropy and value.
  void backward(const Batch& b, const Evaluation& e, const Vector& d_log_prob, const Vector& d_entropy,
                const Vector& d_value, std::vector<double>& grad) const {
    const Eigen::Index n = b.obs.cols();
    const std::size_t nb = spec_.discrete_branches.size();
    Matrix d_out = Matrix::Zero(e.pi_out.rows(), n);
    int row = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      const int m = spec_.discrete_branches[k];
      const Matrix& p = e.probs[k];
      for (Eigen::Index i = 0; i < n; ++i) {
        const int a = b.discrete[static_cast<std::size_t>(i) * nb + k];
        const double h = e.branch_entropy(static_cast<Eigen::Index>(k), i);
        for (int j = 0; j < m; ++j) {
          const double pj = p(j, i);
          const double dlp = (j == a ? 1.0 : 0.0) - pj;
          const double dh = pj > 0.0 ? -pj * (std::log(pj) + h) : 0.0;
          d_out(row + j, i) = d_log_prob[i] * dlp + d_entropy[i] * dh;
        }
      }
      row += m;
    }
    double* g_log_std = grad.data() + pi_.param_count() + vf_.param_count();
    for (int c = 0; c < spec_.continuous_count; ++c) {
      const double sigma = std::exp(log_std()[c]);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double diff = b.pre_squash(c, i) - e.pi_out(row + c, i);
        const double z = diff / sigma;
        d_out(row + c, i) = d_log_prob[i] * diff / (sigma * sigma);
        acc += d_log_prob[i] * (z * z - 1.0) + d_entropy[i];
      }
      g_log_std[c] += acc;
    }
    pi_.backward(e.pi_cache, d_out, pi_params(), grad.data());
    vf_.backward(e.vf_cache, d_value.transpose(), vf_params(), grad.data() + pi_.param_count());
  }

  const Mlp& policy_net() const { return pi_; }
  const Mlp& value_net() const { return vf_; }

 private:
  void check_obs(const std::vector<double>& obs) const {
    if (static_cast<int>(obs.size()) != obs_dim_) {
      throw ConfigError("policy expects observations of size " + std::to_string(obs_dim_) + ", got " +
                        std::to_string(obs.size()));
    }
  }

  template <typename V>
  static double log_sum_exp(const V& z) {
    const double mx = z.maxCoeff();
    return mx + std::log((z.array() - mx).exp().sum());
  }

  template <typename V>
  static Vector softmax(const V& z) {
    const double lse = log_sum_exp(z);
    return (z.array() - lse).exp().matrix();
  }

  template <typename V>
  double log_prob_column(const V& out, const int* discrete, const double* u) const {
    double lp = 0.0;
    int row = 0;
    for (std::size_t k = 0; k < spec_.discrete_branches.size(); ++k) {
      const int m = spec_.discrete_branches[k];
      const auto z = out.segment(row, m);
      lp += z[discrete[k]] - log_sum_exp(z);
      row += m;
    }
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    for (int c = 0; c < spec_.continuous_count; ++c) {
      const double ls = log_std()[c];
      const double z = (u[c] - out[row + c]) / std::exp(ls);
      lp += -0.5 * z * z - ls - half_log_2pi - log_one_minus_tanh_sq(u[c]);
    }
    return lp;
  }

  int obs_dim_ = 0;
  ActionSpec spec_;
  std::vector<int> hidden_;
  int logit_count_ = 0;
  Mlp pi_;
  Mlp vf_;
  std::vector<double> params_;
};

}  // namespace affectively::agents
