#pragma once

#include <algorithm>

#include "affectively/core/errors.hpp"

namespace affectively {

// Per-tick extremes of a game's behaviour reward.
struct BehaviourBounds {
  double min = 0.0;
  double max = 1.0;

  bool operator==(const BehaviourBounds&) const = default;
};

namespace bounds {
// Death alone / power-up plus a rightward move.
inline constexpr BehaviourBounds kPirates{-5.0, 20.1};
// Facing directly away / kill + new cube + facing the target.
inline constexpr BehaviourBounds kHeist{-1.0, 22.0};
// Parked / waypoint at full speed facing the next gate.
inline constexpr BehaviourBounds kSolidRally{0.0, 2.0};
}  // namespace bounds

struct BlendConfig {
  double lambda = 0.0;
  BehaviourBounds behaviour_bounds;
};

inline void validate(const BlendConfig& config) {
  if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0, 1]");
  }
  if (!(config.behaviour_bounds.min < config.behaviour_bounds.max)) {
    throw ConfigError("behaviour bounds require min < max");
  }
}

// Min-max map onto [0, 1]; values outside the bounds are clamped.
inline double normalize_behaviour(double r_b, const BehaviourBounds& b) {
  return std::clamp((r_b - b.min) / (b.max - b.min), 0.0, 1.0);
}

// R_t = (1 - lambda) n(R_B) + lambda R_A
inline double blend(double r_b, double r_a, const BlendConfig& config) {
  const double n = normalize_behaviour(r_b, config.behaviour_bounds);
  return (1.0 - config.lambda) * n + config.lambda * r_a;
}

// Arousal maximization: the predicted probability of an arousal increase is
// the reward. Between windows the signal, and so the reward, is zero.
inline double affect_reward(double signal) { return signal; }

}  // namespace affectively
