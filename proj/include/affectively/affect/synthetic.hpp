#pragma once

// Synthetic arousal-annotated sessions, one trace per simulated player.
//
// Each session has 40 windows (a 120 s episode). A per-session skill u sets
// how fast the player progresses; window features follow a simple random
// process close to what the game simulations produce. Arousal moves by
//   a_w - a_{w-1} = 0.02 * g(window w) + N(0, 0.003)
// and is then rescaled into [0.025, 0.975] per session (sign preserved), where
// g in [-1, 1] is the ground truth for each game:
//   pirates  g = clamp((x_position - 15) / 8)
//   heist    g = clamp((distance_from_spawn - 5) / 3)
//   solid    g = clamp((speed - 7) / 7)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "affectively/affect/corpus.hpp"
#include "affectively/core/errors.hpp"
#include "affectively/core/game.hpp"
#include "affectively/core/rng.hpp"

namespace affectively::affect {

inline constexpr int kSyntheticWindows = 40;

// Index of the ground-truth feature within P.
inline std::size_t ground_truth_feature(GameId game) {
  switch (game) {
    case GameId::Pirates: return 2;     // x position
    case GameId::Heist: return 4;       // distance from spawn
    case GameId::SolidRally: return 0;  // speed
  }
  return 0;
}

inline double ground_truth(GameId game, const std::vector<double>& p) {
  const double v = p[ground_truth_feature(game)];
  switch (game) {
    case GameId::Pirates: return std::clamp((v - 15.0) / 8.0, -1.0, 1.0);
    case GameId::Heist: return std::clamp((v - 5.0) / 3.0, -1.0, 1.0);
    case GameId::SolidRally: return std::clamp((v - 7.0) / 7.0, -1.0, 1.0);
  }
  return 0.0;
}

namespace detail {

inline std::vector<std::vector<double>> pirates_session(Rng& rng) {
  const double u = rng.uniform(0.1, 1.0);
  std::vector<std::vector<double>> w;
  double x = rng.uniform(3.0, 8.0);
  double coins = 0, powerups = 0, deaths = 0;
  for (int i = 0; i < kSyntheticWindows; ++i) {
    if (i > 0) {
      const double dx = rng.bernoulli(0.15) ? rng.normal(0.0, 1.5) : rng.normal(u * 10.0, 3.0);
      x = std::clamp(x + dx, 2.0, 198.0);
      const double progress = std::clamp((x - 10.0) / 190.0, 0.0, 1.0);
      coins = std::max(coins, std::round(36.0 * progress * (0.5 + 0.5 * u)));
      powerups = std::max(powerups, std::floor(5.0 * progress * u));
      if (rng.bernoulli(0.08)) deaths += 1;
    }
    w.push_back({coins * 10.0 + powerups * 20.0, 1.0, x, coins, deaths});
  }
  return w;
}

inline std::vector<std::vector<double>> heist_session(Rng& rng) {
  const double u = rng.uniform(0.1, 1.0);
  std::vector<std::vector<double>> w;
  double d = rng.uniform(0.0, 2.0);
  double kills = 0, health = 100, visited = 1, far = d;
  for (int i = 0; i < kSyntheticWindows; ++i) {
    if (i > 0) {
      if (rng.bernoulli(0.05)) {
        d = rng.uniform(0.0, 2.0);
        health = 100;
      } else {
        d = std::clamp(d + rng.normal(u * 4.0 - 0.5, 2.5), 0.0, 60.0);
        health = std::max(10.0, health - 10.0 * static_cast<double>(rng.uniform_int(3)));
      }
      far = std::max(far, d);
      visited = std::max(visited, 1.0 + std::floor(far / 5.0) + static_cast<double>(rng.uniform_int(2)));
      if (rng.bernoulli(0.25 * u)) kills += 1;
    }
    const double ammo = rng.uniform(2.0, 11.0);
    w.push_back({kills, ammo, health, visited, d});
  }
  return w;
}

inline std::vector<std::vector<double>> rally_session(Rng& rng) {
  const double u = rng.uniform(0.1, 1.0);
  std::vector<std::vector<double>> w;
  double s = rng.uniform(0.0, 4.0);
  double travelled = 0;
  for (int i = 0; i < kSyntheticWindows; ++i) {
    if (i > 0) {
      if (rng.bernoulli(0.1)) {
        s = rng.uniform(-2.0, 4.0);
      } else {
        s = std::clamp(0.5 * s + 0.5 * u * 20.0 + rng.normal(0.0, 2.0), -2.0, 20.0);
      }
      travelled += std::max(0.0, s) * 3.0;
    }
    const double slow = 1.0 - std::clamp(s / 20.0, 0.0, 1.0);
    const double passed = std::floor(travelled / 62.5);
    const double angle = std::clamp(rng.normal(0.15 + 0.8 * slow, 0.15), 0.0, 3.14159);
    const double off = std::clamp(rng.normal(0.3 * slow, 0.1), 0.0, 1.0);
    const double moved = std::max(0.0, std::abs(s) / 10.0 + rng.normal(0.0, 0.05));
    w.push_back({s, passed, angle, off, moved});
  }
  return w;
}

}  // namespace detail

inline std::vector<Trace> generate_synthetic_corpus(GameId game, std::uint64_t seed, int n_sessions) {
  if (n_sessions < 1) throw ConfigError("synthetic corpus: n_sessions must be >= 1");
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(game) + 101));
  std::vector<Trace> out;
  out.reserve(static_cast<std::size_t>(n_sessions));
  for (int s = 0; s < n_sessions; ++s) {
    std::vector<std::vector<double>> features;
    switch (game) {
      case GameId::Pirates: features = detail::pirates_session(rng); break;
      case GameId::Heist: features = detail::heist_session(rng); break;
      case GameId::SolidRally: features = detail::rally_session(rng); break;
    }
    std::vector<double> a(features.size(), 0.0);
    for (std::size_t i = 1; i < features.size(); ++i) {
      a[i] = a[i - 1] + 0.02 * ground_truth(game, features[i]) + rng.normal(0.0, 0.003);
    }
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    const double range = *hi - *lo;
    const double scale = range > 0.95 ? 0.95 / range : 1.0;
    const double centre = 0.5 * (*hi + *lo);
    Trace t;
    for (std::size_t i = 0; i < features.size(); ++i) {
      FeatureWindow w;
      w.session_id = s + 1;
      w.window_index = static_cast<int>(i);
      w.features = std::move(features[i]);
      w.mean_arousal = std::clamp(0.5 + (a[i] - centre) * scale, 0.0, 1.0);
      t.push_back(std::move(w));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace affectively::affect
