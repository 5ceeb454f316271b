#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>

#include "test_support.hpp"

using namespace affectively;
using namespace affectively::agents;

namespace {

struct Toy {
  ActorCritic model;
  ActorCritic::Batch batch;
  Vector old_lp, adv, ret;
};

// Small network with a mixed action space and a batch sampled from it.
Toy make_toy(std::uint64_t seed, const std::vector<double>& lp_shift) {
  Toy t{ActorCritic(4, {{3, 2}, 2}, {5, 3}), {}, {}, {}, {}};
  Rng rng(seed);
  t.model.init(rng);
  for (double& p : t.model.params()) p += 0.3 * rng.normal();
  const int n = static_cast<int>(lp_shift.size());
  t.batch.obs.resize(4, n);
  t.batch.pre_squash.resize(2, n);
  t.old_lp.resize(n);
  t.adv.resize(n);
  t.ret.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> obs(4);
    for (auto& v : obs) v = rng.normal();
    const PolicySample s = t.model.act(obs, rng);
    t.batch.obs.col(i) = Eigen::Map<const Vector>(obs.data(), 4);
    t.batch.discrete.push_back(s.action.discrete[0]);
    t.batch.discrete.push_back(s.action.discrete[1]);
    t.batch.pre_squash(0, i) = s.pre_squash[0];
    t.batch.pre_squash(1, i) = s.pre_squash[1];
    t.old_lp[i] = s.log_prob + lp_shift[static_cast<std::size_t>(i)];
    t.adv[i] = rng.normal();
    t.ret[i] = rng.normal();
  }
  return t;
}

}  // namespace

TEST(PpoLoss, AnalyticGradientMatchesFiniteDifferences) {
  // Shifts keep every ratio away from the clip kinks at log(0.8) and log(1.2).
  const Toy t = make_toy(1, {0.5, -0.03, -0.4, 0.02, -0.6, 0.3, 0.0, 0.1});
  TrainConfig cfg;
  std::vector<double> grad(t.model.param_count(), 0.0);
  const LossTerms base = ppo_loss(t.model, t.batch, t.old_lp, t.adv, t.ret, cfg, &grad);
  EXPECT_GT(base.clip_fraction, 0.0);
  ActorCritic probe = t.model;
  const double h = 1e-6;
  int checked = 0;
  for (std::size_t i = 0; i < probe.param_count(); ++i) {
    const double keep = probe.params()[i];
    probe.params()[i] = keep + h;
    const double up = ppo_loss(probe, t.batch, t.old_lp, t.adv, t.ret, cfg, nullptr).total;
    probe.params()[i] = keep - h;
    const double down = ppo_loss(probe, t.batch, t.old_lp, t.adv, t.ret, cfg, nullptr).total;
    probe.params()[i] = keep;
    const double fd = (up - down) / (2 * h);
    const double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-3});
    ASSERT_LE(std::abs(fd - grad[i]) / scale, 1e-4) << "param " << i << " fd " << fd << " analytic " << grad[i];
    ++checked;
  }
  EXPECT_EQ(checked, static_cast<int>(t.model.param_count()));
}

TEST(PpoLoss, UnchangedParamsGiveUnitRatio) {
  Toy t = make_toy(2, std::vector<double>(16, 0.0));
  t.old_lp = t.model.evaluate(t.batch).log_prob;
  TrainConfig cfg;
  const LossTerms l = ppo_loss(t.model, t.batch, t.old_lp, t.adv, t.ret, cfg, nullptr);
  EXPECT_NEAR(l.mean_ratio, 1.0, 1e-12);
  EXPECT_NEAR(l.policy, -t.adv.mean(), 1e-12);
  EXPECT_NEAR(l.approx_kl, 0.0, 1e-12);
  EXPECT_EQ(l.clip_fraction, 0.0);
  EXPECT_NEAR(l.total, l.policy + 0.5 * l.value - 0.01 * l.entropy, 1e-12);
}

TEST(PpoLoss, SampledLogProbMatchesEvaluate) {
  const Toy t = make_toy(3, std::vector<double>(10, 0.0));
  const auto e = t.model.evaluate(t.batch);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(e.log_prob[i], t.old_lp[i], 1e-10);
}

TEST(PpoLoss, EntropyOfUniformBranches) {
  ActorCritic m(3, {{3, 2}, 1}, {4});
  ActorCritic::Batch b;
  b.obs = Matrix::Zero(3, 1);
  b.discrete = {0, 0};
  b.pre_squash = Matrix::Zero(1, 1);
  const auto e = m.evaluate(b);  // all-zero params: uniform logits, log_std 0
  const double gauss = 0.5 + 0.5 * std::log(2 * std::numbers::pi);
  EXPECT_NEAR(e.entropy[0], std::log(3.0) + std::log(2.0) + gauss, 1e-12);
}

TEST(Advantages, NormalizationUsesPopulationStd) {
  Vector a(5);
  a << 1, 2, 3, 4, 10;
  const Vector n = normalize_advantages(a);
  EXPECT_NEAR(n.mean(), 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(n.array().square().mean()), 1.0, 1e-7);
  EXPECT_NEAR(n[4], (10 - 4.0) / std::sqrt(10.0), 1e-7);
}

TEST(Advantages, GaeMatchesDirectSum) {
  Rng rng(4);
  Rollout r;
  const int T = 40;
  r.obs.resize(1, T);
  r.value.resize(T);
  r.reward.resize(T);
  r.done.assign(T, 0);
  for (int t = 0; t < T; ++t) {
    r.value[t] = rng.normal();
    r.reward[t] = rng.normal();
    r.done[static_cast<std::size_t>(t)] = rng.bernoulli(0.1);
  }
  r.last_value = 0.7;
  const double g = 0.99, l = 0.95;
  compute_gae(r, g, l);
  for (int t = 0; t < T; ++t) {
    double a = 0.0, w = 1.0;
    for (int k = t; k < T; ++k) {
      const bool d = r.done[static_cast<std::size_t>(k)];
      const double next = k + 1 < T ? r.value[k + 1] : r.last_value;
      a += w * (r.reward[k] + (d ? 0.0 : g * next) - r.value[k]);
      if (d) break;
      w *= g * l;
    }
    EXPECT_NEAR(r.advantage[t], a, 1e-12) << t;
    EXPECT_NEAR(r.returns[t], a + r.value[t], 1e-12);
  }
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  Adam opt(3, 0.9, 0.999, 1e-8);
  std::vector<double> p{1.0, 1.0, 1.0};
  opt.step(p, {2.0, -0.5, 0.0}, 0.1);
  EXPECT_NEAR(p[0], 0.9, 1e-7);
  EXPECT_NEAR(p[1], 1.1, 1e-7);
  EXPECT_EQ(p[2], 1.0);
  EXPECT_EQ(opt.steps(), 1);
}

// Continuous samples at zero mean and unit stddev: Phi(atanh(a)) ~ U(0, 1).
TEST(Sampling, ContinuousSlotsPassKolmogorovSmirnov) {
  ActorCritic m(6, {{2}, 2}, {8});
  Rng init(5);
  m.init(init);
  const std::vector<double> zero(6, 0.0);
  ASSERT_EQ(m.act_deterministic(zero).continuous, (std::vector<double>{0.0, 0.0}));
  Rng rng(6);
  const int n = 20000;
  boost::math::normal_distribution<> phi;
  for (int slot = 0; slot < 2; ++slot) {
    std::vector<double> u;
    Rng r(rng.next_u64());
    for (int i = 0; i < n; ++i) {
      const double a = m.act(zero, r).action.continuous[static_cast<std::size_t>(slot)];
      ASSERT_GT(a, -1.0);
      ASSERT_LT(a, 1.0);
      u.push_back(boost::math::cdf(phi, std::atanh(a)));
    }
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) d = std::max({d, (i + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
    EXPECT_LT(d, 1.63 / std::sqrt(static_cast<double>(n))) << "slot " << slot;
  }
}

TEST(Sampling, RandomPolicyIgnoresObservation) {
  const ActionSpec spec{{3, 3, 2}, 2};
  RandomPolicy p(spec);
  Observation a{2, 2, {0, 1, 2, 3}, {0.5}};
  Observation b{1, 1, {7}, {}};
  Rng r1(3), r2(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(p.act(a, r1), p.act(b, r2));
  EXPECT_EQ(p.name(), "random");
}

TEST(Sampling, PolicyActionsAreAlwaysValid) {
  for (GameId g : kAllGames) {
    auto env = testing_support::make_env(g);
    const Observation o = env->reset(1);
    const int dim = static_cast<int>(flat_size(o, env->grid_id_count()));
    ActorCritic m(dim, env->action_spec(), {16});
    Rng rng(7);
    m.init(rng);
    for (double& p : m.params()) p += rng.normal();  // push some logits and means to extremes
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (int i = 0; i < 20000; ++i) {
      for (auto& v : x) v = rng.normal();
      ASSERT_NO_THROW(validate_action(env->action_spec(), m.act(x, rng).action));
    }
    EXPECT_THROW(m.act(std::vector<double>(3), rng), ConfigError);
  }
}

TEST(Training, ZeroLambdaNeverQueriesTheCorpus) {
  auto model = testing_support::synthetic_model(GameId::SolidRally);
  auto env = testing_support::make_env(GameId::SolidRally, model, 0.0);
  TrainConfig cfg;
  cfg.total_steps = 512;
  cfg.rollout_length = 256;
  cfg.epochs = 2;
  model->reset_query_count();
  const TrainResult r = train(*env, cfg, 3);
  EXPECT_EQ(model->query_count(), 0u);
  EXPECT_TRUE(env->affect_queries()) << "query switch restored after training";
  EXPECT_EQ(r.steps, 512);
  EXPECT_EQ(r.updates.size(), 2u);

  auto env2 = testing_support::make_env(GameId::SolidRally, model, 0.5);
  train(*env2, cfg, 3);
  EXPECT_GT(model->query_count(), 0u);
}

TEST(Training, DeterministicForASeed) {
  auto run = [](std::uint64_t seed) {
    auto env = testing_support::make_env(GameId::Heist);
    TrainConfig cfg;
    cfg.total_steps = 300;
    cfg.rollout_length = 150;
    cfg.epochs = 2;
    cfg.minibatch = 32;
    cfg.hidden = {16};
    return train(*env, cfg, seed).model->params();
  };
  const auto a = run(11);
  EXPECT_EQ(a, run(11));
  EXPECT_NE(a, run(12));
}

TEST(Training, NonFiniteLossAborts) {
  ActorCritic m(2, {{2}, 0}, {4});
  Rng rng(1);
  m.init(rng);
  Rollout r;
  r.obs = Matrix::Ones(2, 4);
  r.discrete = {0, 1, 0, 1};
  r.pre_squash.resize(0, 4);
  r.log_prob = Vector::Constant(4, std::log(0.5));
  r.value = Vector::Zero(4);
  r.reward = Vector::Zero(4);
  r.reward[2] = std::nan("");
  r.done.assign(4, 0);
  compute_gae(r, 0.99, 0.95);
  const auto before = m.params();
  Adam opt(m.param_count());
  TrainConfig cfg;
  cfg.minibatch = 4;
  EXPECT_THROW(ppo_update(m, opt, r, cfg, rng), TrainingError);
  EXPECT_EQ(m.params(), before);
}

TEST(Training, ConfigValidation) {
  TrainConfig c;
  c.clip = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.hidden = {};
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.total_steps = 0;
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_NO_THROW(validate(TrainConfig{}));
}

TEST(Checkpoint, RoundTripPreservesPolicy) {
  auto env = testing_support::make_env(GameId::Heist);
  const Observation o = env->reset(2);
  const int dim = static_cast<int>(flat_size(o, env->grid_id_count()));
  Checkpoint c;
  c.game = GameId::Heist;
  c.id_count = env->grid_id_count();
  c.seed = 0xfeedfacecafebeefull;
  c.lambda = 0.5;
  c.steps = 4096;
  c.train.hidden = {8, 8};
  c.model = std::make_shared<ActorCritic>(dim, env->action_spec(), c.train.hidden);
  Rng rng(9);
  c.model->init(rng);
  for (double& p : c.model->params()) p += 1e-3 * rng.normal();

  const Checkpoint back = checkpoint_from_json(json::parse(checkpoint_to_json(c).dump()));
  EXPECT_EQ(back.game, c.game);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.lambda, 0.5);
  EXPECT_EQ(back.steps, 4096);
  EXPECT_EQ(back.train, c.train);
  EXPECT_EQ(back.model->params(), c.model->params());
  const auto x = flatten(o, env->grid_id_count());
  EXPECT_EQ(back.model->act_deterministic(x), c.model->act_deterministic(x));
  EXPECT_EQ(back.model->value(x), c.model->value(x));

  json bad = checkpoint_to_json(c);
  bad["version"] = 99;
  EXPECT_THROW(checkpoint_from_json(bad), FormatError);
  bad = checkpoint_to_json(c);
  bad["params"].erase(0);
  EXPECT_THROW(checkpoint_from_json(bad), FormatError);
  bad = checkpoint_to_json(c);
  bad.erase("game");
  EXPECT_THROW(checkpoint_from_json(bad), FormatError);
}
