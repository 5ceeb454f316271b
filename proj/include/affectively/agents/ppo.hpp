#pragma once

// Clipped-surrogate policy optimisation with GAE, Adam and global gradient
// norm clipping.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "affectively/agents/actor_critic.hpp"
#include "affectively/core/environment.hpp"
#include "affectively/core/errors.hpp"
#include "affectively/core/rng.hpp"

namespace affectively::agents {

struct TrainConfig {
  long total_steps = 100000;
  double clip = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3e-4;
  int rollout_length = 2048;
  int epochs = 10;
  int minibatch = 64;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  double adam_epsilon = 1e-5;
  std::vector<int> hidden{64, 64};

  bool operator==(const TrainConfig&) const = default;
};

inline void validate(const TrainConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("train config: ") + what);
  };
  need(c.total_steps > 0, "total_steps must be > 0");
  need(c.clip > 0 && c.clip < 1, "clip must lie in (0, 1)");
  need(c.gamma > 0 && c.gamma <= 1, "gamma must lie in (0, 1]");
  need(c.gae_lambda > 0 && c.gae_lambda <= 1, "gae_lambda must lie in (0, 1]");
  need(c.learning_rate > 0, "learning_rate must be > 0");
  need(c.rollout_length > 0, "rollout_length must be > 0");
  need(c.epochs > 0, "epochs must be > 0");
  need(c.minibatch > 0, "minibatch must be > 0");
  need(c.entropy_coef >= 0, "entropy_coef must be >= 0");
  need(c.value_coef > 0, "value_coef must be > 0");
  need(c.max_grad_norm > 0, "max_grad_norm must be > 0");
  need(c.adam_epsilon > 0, "adam_epsilon must be > 0");
  need(!c.hidden.empty(), "hidden must list at least one layer");
  for (int h : c.hidden) need(h > 0, "hidden sizes must be > 0");
}

class Adam {
 public:
  explicit Adam(std::size_t n = 0, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-5)
      : m_(n, 0.0), v_(n, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
      params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
  }

  long steps() const { return t_; }

 private:
  std::vector<double> m_, v_;
  double beta1_, beta2_, eps_;
  long t_ = 0;
};

struct Rollout {
  Matrix obs;                  // obs_dim x T
  std::vector<int> discrete;   // T x branches
  Matrix pre_squash;           // continuous x T
  Vector log_prob, value, reward;
  std::vector<char> done;      // episode ended after step t
  double last_value = 0.0;     // V(s_T) used when the rollout stops mid-episode
  Vector advantage, returns;

  Eigen::Index size() const { return obs.cols(); }
};

inline void compute_gae(Rollout& r, double gamma, double lambda) {
  const Eigen::Index t_len = r.size();
  r.advantage = Vector::Zero(t_len);
  double last = 0.0;
  for (Eigen::Index t = t_len; t-- > 0;) {
    const double non_terminal = r.done[static_cast<std::size_t>(t)] ? 0.0 : 1.0;
    const double next_value = t + 1 == t_len ? r.last_value : r.value[t + 1];
    const double delta = r.reward[t] + gamma * next_value * non_terminal - r.value[t];
    last = delta + gamma * lambda * non_terminal * last;
    r.advantage[t] = last;
  }
  r.returns = r.advantage + r.value;
}

// Zero mean, unit (population) variance.
inline Vector normalize_advantages(const Vector& a) {
  const double mean = a.mean();
  const double var = (a.array() - mean).square().mean();
  return ((a.array() - mean) / (std::sqrt(var) + 1e-8)).matrix();
}

struct LossTerms {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;  // mean entropy (the loss uses its negative)
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double mean_ratio = 0.0;
};

// L = -mean(min(r A, clip(r, 1-e, 1+e) A)) + c_v mean((V - R)^2) - c_e mean(H)
// with r = exp(log_prob - old_log_prob). Adds dL/dparams into *grad if given.
inline LossTerms ppo_loss(const ActorCritic& model, const ActorCritic::Batch& batch, const Vector& old_log_prob,
                          const Vector& advantage, const Vector& returns, const TrainConfig& cfg,
                          std::vector<double>* grad) {
  const auto e = model.evaluate(batch);
  const Eigen::Index n = batch.obs.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  LossTerms out;
  Vector d_lp = Vector::Zero(n);
  Vector d_ent = Vector::Constant(n, -cfg.entropy_coef * inv_n);
  Vector d_v(n);
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double log_ratio = e.log_prob[i] - old_log_prob[i];
    const double ratio = std::exp(log_ratio);
    const double a = advantage[i];
    const double unclipped = ratio * a;
    const double clipped_ratio = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip);
    const double clipped_term = clipped_ratio * a;
    if (unclipped <= clipped_term) {
      out.policy -= unclipped;
      d_lp[i] = -inv_n * unclipped;
    } else {
      out.policy -= clipped_term;
    }
    if (std::abs(ratio - 1.0) > cfg.clip) clipped += 1.0;
    out.approx_kl += (ratio - 1.0) - log_ratio;
    out.mean_ratio += ratio;
    const double diff = e.value[i] - returns[i];
    out.value += diff * diff;
    d_v[i] = cfg.value_coef * 2.0 * diff * inv_n;
    out.entropy += e.entropy[i];
  }
  out.policy *= inv_n;
  out.value *= inv_n;
  out.entropy *= inv_n;
  out.approx_kl *= inv_n;
  out.mean_ratio *= inv_n;
  out.clip_fraction = clipped * inv_n;
  out.total = out.policy + cfg.value_coef * out.value - cfg.entropy_coef * out.entropy;
  if (grad) model.backward(batch, e, d_lp, d_ent, d_v, *grad);
  return out;
}

struct UpdateStats {
  LossTerms last;
  double mean_policy_loss = 0.0;
  double mean_value_loss = 0.0;
  double mean_entropy = 0.0;
  double mean_approx_kl = 0.0;
  double mean_clip_fraction = 0.0;
  int minibatches = 0;
};

inline ActorCritic::Batch gather(const ActorCritic& model, const Rollout& r, const std::vector<Eigen::Index>& idx,
                                 std::size_t begin, std::size_t end) {
  const std::size_t nb = model.spec().discrete_branches.size();
  const int nc = model.spec().continuous_count;
  const auto m = static_cast<Eigen::Index>(end - begin);
  ActorCritic::Batch b;
  b.obs.resize(r.obs.rows(), m);
  b.pre_squash.resize(nc, m);
  b.discrete.resize(static_cast<std::size_t>(m) * nb);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index t = idx[begin + static_cast<std::size_t>(j)];
    b.obs.col(j) = r.obs.col(t);
    if (nc > 0) b.pre_squash.col(j) = r.pre_squash.col(t);
    for (std::size_t k = 0; k < nb; ++k) {
      b.discrete[static_cast<std::size_t>(j) * nb + k] = r.discrete[static_cast<std::size_t>(t) * nb + k];
    }
  }
  return b;
}

inline bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Runs cfg.epochs passes of shuffled minibatches over the rollout. A
// non-finite loss or gradient restores the pre-update parameters and throws.
inline UpdateStats ppo_update(ActorCritic& model, Adam& opt, const Rollout& r, const TrainConfig& cfg, Rng& rng) {
  const std::vector<double> backup = model.params();
  const auto t_len = static_cast<std::size_t>(r.size());
  std::vector<Eigen::Index> idx(t_len);
  for (std::size_t i = 0; i < t_len; ++i) idx[i] = static_cast<Eigen::Index>(i);
  std::vector<double> grad(model.param_count());
  UpdateStats stats;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = t_len; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(i)));
      std::swap(idx[i - 1], idx[j]);
    }
    for (std::size_t begin = 0; begin < t_len; begin += static_cast<std::size_t>(cfg.minibatch)) {
      const std::size_t end = std::min(t_len, begin + static_cast<std::size_t>(cfg.minibatch));
      const auto batch = gather(model, r, idx, begin, end);
      const auto m = static_cast<Eigen::Index>(end - begin);
      Vector old_lp(m), adv(m), ret(m);
      for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index t = idx[begin + static_cast<std::size_t>(j)];
        old_lp[j] = r.log_prob[t];
        adv[j] = r.advantage[t];
        ret[j] = r.returns[t];
      }
      if (m > 1) adv = normalize_advantages(adv);
      std::fill(grad.begin(), grad.end(), 0.0);
      const LossTerms loss = ppo_loss(model, batch, old_lp, adv, ret, cfg, &grad);
      if (!std::isfinite(loss.total) || !all_finite(grad)) {
        model.params() = backup;
        std::ostringstream msg;
        msg << "ppo update aborted: non-finite loss (policy " << loss.policy << ", value " << loss.value
            << ", entropy " << loss.entropy << ") at epoch " << epoch << ", minibatch offset " << begin;
        throw TrainingError(msg.str());
      }
      double norm2 = 0.0;
      for (double g : grad) norm2 += g * g;
      const double norm = std::sqrt(norm2);
      if (norm > cfg.max_grad_norm) {
        const double s = cfg.max_grad_norm / (norm + 1e-6);
        for (double& g : grad) g *= s;
      }
      opt.step(model.params(), grad, cfg.learning_rate);
      stats.last = loss;
      stats.mean_policy_loss += loss.policy;
      stats.mean_value_loss += loss.value;
      stats.mean_entropy += loss.entropy;
      stats.mean_approx_kl += loss.approx_kl;
      stats.mean_clip_fraction += loss.clip_fraction;
      ++stats.minibatches;
    }
  }
  if (stats.minibatches > 0) {
    const double k = 1.0 / stats.minibatches;
    stats.mean_policy_loss *= k;
    stats.mean_value_loss *= k;
    stats.mean_entropy *= k;
    stats.mean_approx_kl *= k;
    stats.mean_clip_fraction *= k;
  }
  return stats;
}

struct EpisodeLog {
  long start_step = 0;
  int ticks = 0;
  double final_score = 0.0;
  double normalized_score = 0.0;
  double total_reward = 0.0;
};

struct UpdateLog {
  long steps = 0;
  UpdateStats stats;
};

struct TrainResult {
  std::shared_ptr<ActorCritic> model;
  std::vector<EpisodeLog> episodes;
  std::vector<UpdateLog> updates;
  long steps = 0;
};

// Collects one rollout of cfg.rollout_length steps, continuing the current
// episode across calls.
class RolloutCollector {
 public:
  RolloutCollector(Environment& env, std::uint64_t seed) : env_(env), episode_seeds_(derive_seed(seed, streams::kEpisodeSeeds)),
        action_rng_(derive_seed(seed, streams::kAgent)) {}

  Rollout collect(const ActorCritic& model, int length, long step_offset, std::vector<EpisodeLog>& episodes) {
    const int id_count = env_.grid_id_count();
    const std::size_t nb = model.spec().discrete_branches.size();
    const int nc = model.spec().continuous_count;
    Rollout r;
    r.obs.resize(model.obs_dim(), length);
    r.pre_squash.resize(nc, length);
    r.discrete.resize(static_cast<std::size_t>(length) * nb);
    r.log_prob.resize(length);
    r.value.resize(length);
    r.reward.resize(length);
    r.done.assign(static_cast<std::size_t>(length), 0);
    std::vector<double> x(static_cast<std::size_t>(model.obs_dim()));
    for (int t = 0; t < length; ++t) {
      if (!has_obs_) start_episode(step_offset + t);
      flatten_into(obs_, id_count, x.data());
      const PolicySample s = model.act(x, action_rng_);
      r.obs.col(t) = Eigen::Map<const Vector>(x.data(), model.obs_dim());
      for (std::size_t k = 0; k < nb; ++k) r.discrete[static_cast<std::size_t>(t) * nb + k] = s.action.discrete[k];
      for (int c = 0; c < nc; ++c) r.pre_squash(c, t) = s.pre_squash[static_cast<std::size_t>(c)];
      r.log_prob[t] = s.log_prob;
      r.value[t] = s.value;
      const StepResult res = env_.step(s.action);
      r.reward[t] = res.total_reward;
      current_.total_reward += res.total_reward;
      obs_ = res.observation;
      if (res.done) {
        r.done[static_cast<std::size_t>(t)] = 1;
        current_.ticks = res.tick;
        current_.final_score = res.score;
        current_.normalized_score = res.score / env_.max_score();
        episodes.push_back(current_);
        has_obs_ = false;
      }
    }
    if (has_obs_) {
      flatten_into(obs_, id_count, x.data());
      r.last_value = model.value(x);
    }
    return r;
  }

 private:
  void start_episode(long step) {
    obs_ = env_.reset(episode_seeds_.next_u64());
    has_obs_ = true;
    current_ = EpisodeLog{};
    current_.start_step = step;
  }

  Environment& env_;
  Rng episode_seeds_;
  Rng action_rng_;
  Observation obs_;
  bool has_obs_ = false;
  EpisodeLog current_;
};

inline int observation_size(Environment& env) {
  const Observation o = env.reset(0);
  return static_cast<int>(flat_size(o, env.grid_id_count()));
}

using ProgressFn = std::function<void(const TrainResult&)>;

// Trains a fresh policy for at least cfg.total_steps environment steps
// (rounded up to whole rollouts). With lambda = 0 affect queries are turned
// off for the duration of training.
inline TrainResult train(Environment& env, const TrainConfig& cfg, std::uint64_t seed,
                         const ProgressFn& progress = nullptr) {
  validate(cfg);
  const bool queries = env.affect_queries();
  if (env.lambda() == 0.0) env.set_affect_queries(false);
  struct Restore {
    Environment& env;
    bool queries;
    ~Restore() { env.set_affect_queries(queries); }
  } restore{env, queries};

  TrainResult out;
  out.model = std::make_shared<ActorCritic>(observation_size(env), env.action_spec(), cfg.hidden);
  Rng init_rng(derive_seed(seed, streams::kInit));
  out.model->init(init_rng);
  Adam opt(out.model->param_count(), 0.9, 0.999, cfg.adam_epsilon);
  Rng minibatch_rng(derive_seed(seed, streams::kMinibatch));
  RolloutCollector collector(env, seed);
  while (out.steps < cfg.total_steps) {
    Rollout r = collector.collect(*out.model, cfg.rollout_length, out.steps, out.episodes);
    out.steps += cfg.rollout_length;
    compute_gae(r, cfg.gamma, cfg.gae_lambda);
    UpdateLog log;
    log.steps = out.steps;
    log.stats = ppo_update(*out.model, opt, r, cfg, minibatch_rng);
    out.updates.push_back(log);
    if (progress) progress(out);
  }
  return out;
}

}  // namespace affectively::agents
