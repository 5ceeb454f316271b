#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace affectively;

TEST(Normalize, BoundsMapToUnitInterval) {
  EXPECT_EQ(normalize_behaviour(2.0, bounds::kSolidRally), 1.0);
  EXPECT_EQ(normalize_behaviour(0.0, bounds::kSolidRally), 0.0);
  EXPECT_EQ(normalize_behaviour(-5.0, bounds::kPirates), 0.0);
  EXPECT_NEAR(normalize_behaviour(20.1, bounds::kPirates), 1.0, 1e-15);
  EXPECT_NEAR(normalize_behaviour(7.55, bounds::kPirates), 0.5, 1e-12);
  EXPECT_NEAR(normalize_behaviour(10.5, bounds::kHeist), 0.5, 1e-12);
  EXPECT_EQ(normalize_behaviour(99.0, bounds::kHeist), 1.0);
  EXPECT_EQ(normalize_behaviour(-99.0, bounds::kHeist), 0.0);
}

TEST(Normalize, GameBoundsMatchReferenceValues) {
  for (GameId g : kAllGames) {
    const auto b = testing_support::make_default_game(g)->behaviour_bounds();
    const BehaviourBounds want = g == GameId::Pirates ? bounds::kPirates
                                 : g == GameId::Heist ? bounds::kHeist
                                                      : bounds::kSolidRally;
    EXPECT_NEAR(b.min, want.min, 1e-12);
    EXPECT_NEAR(b.max, want.max, 1e-12);
  }
}

TEST(Blend, ExampleValue) {
  BlendConfig c{0.5, bounds::kSolidRally};
  EXPECT_NEAR(blend(1.0, 0.3, c), 0.4, 1e-12);
}

TEST(Blend, ExtremeLambdas) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double rb = rng.uniform(-5.0, 20.1);
    const double ra = rng.uniform();
    EXPECT_EQ(blend(rb, ra, {0.0, bounds::kPirates}), normalize_behaviour(rb, bounds::kPirates));
    EXPECT_EQ(blend(rb, ra, {1.0, bounds::kPirates}), ra);
  }
}

TEST(Blend, AffineInLambdaAndBounded) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double rb = rng.uniform(-2.0, 23.0);
    const double ra = rng.uniform();
    const double l = rng.uniform();
    const double n = normalize_behaviour(rb, bounds::kHeist);
    const double r = blend(rb, ra, {l, bounds::kHeist});
    EXPECT_NEAR(r, n + l * (ra - n), 1e-12);
    EXPECT_GE(r, std::min(n, ra) - 1e-15);
    EXPECT_LE(r, std::max(n, ra) + 1e-15);
  }
}

TEST(Blend, ValidatesConfig) {
  EXPECT_THROW(validate(BlendConfig{-0.1, bounds::kHeist}), ConfigError);
  EXPECT_THROW(validate(BlendConfig{1.1, bounds::kHeist}), ConfigError);
  EXPECT_THROW(validate(BlendConfig{0.5, {1.0, 1.0}}), ConfigError);
  EXPECT_THROW(Environment(testing_support::make_default_game(GameId::Heist), nullptr, 2.0), ConfigError);
}

TEST(Blend, EnvironmentTotalRewardOracle) {
  for (GameId g : kAllGames) {
    auto model = testing_support::synthetic_model(g);
    for (double l : {0.0, 0.25, 0.5, 1.0}) {
      auto env = testing_support::make_env(g, model, l);
      const auto b = env->game().behaviour_bounds();
      Rng rng(6);
      for (const auto& r : testing_support::play(*env, 2, rng, 400)) {
        const double n = std::clamp((r.behaviour_reward - b.min) / (b.max - b.min), 0.0, 1.0);
        ASSERT_NEAR(r.total_reward, (1 - l) * n + l * r.affect_signal, 1e-12);
        ASSERT_EQ(r.affect_reward, r.affect_signal);
        if (!r.affect_emitted) ASSERT_EQ(r.affect_signal, 0.0);
        ASSERT_GE(r.total_reward, 0.0);
        ASSERT_LE(r.total_reward, 1.0);
      }
    }
  }
}

TEST(Blend, ZeroLambdaIgnoresTheModel) {
  for (GameId g : kAllGames) {
    auto with = testing_support::make_env(g, testing_support::synthetic_model(g), 0.0);
    auto without = testing_support::make_env(g, nullptr, 0.0);
    Rng r1(9), r2(9);
    const auto a = testing_support::play(*with, 4, r1, 300);
    const auto b = testing_support::play(*without, 4, r2, 300);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].total_reward, b[i].total_reward);
      ASSERT_EQ(a[i].observation, b[i].observation);
      ASSERT_EQ(a[i].score, b[i].score);
    }
  }
}

TEST(Blend, QueriesCanBeSwitchedOff) {
  auto model = testing_support::synthetic_model(GameId::SolidRally);
  auto env = testing_support::make_env(GameId::SolidRally, model, 0.0);
  env->set_affect_queries(false);
  model->reset_query_count();
  Rng rng(1);
  for (const auto& r : testing_support::play(*env, 1, rng)) ASSERT_FALSE(r.affect_emitted);
  EXPECT_EQ(model->query_count(), 0u);
}
