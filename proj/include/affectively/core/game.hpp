#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "affectively/core/errors.hpp"
#include "affectively/core/spaces.hpp"
#include "affectively/reward/blend.hpp"

namespace affectively {

enum class GameId { Pirates, Heist, SolidRally };

inline std::string to_string(GameId id) {
  switch (id) {
    case GameId::Pirates: return "pirates";
    case GameId::Heist: return "heist";
    case GameId::SolidRally: return "solid";
  }
  return "unknown";
}

inline GameId parse_game_id(std::string_view name) {
  if (name == "pirates") return GameId::Pirates;
  if (name == "heist") return GameId::Heist;
  if (name == "solid" || name == "solidrally" || name == "solid-rally" || name == "rally") {
    return GameId::SolidRally;
  }
  throw ConfigError("unknown game id '" + std::string(name) + "' (expected pirates, heist or solid)");
}

inline constexpr GameId kAllGames[] = {GameId::Pirates, GameId::Heist, GameId::SolidRally};

// One game simulation. Holds the previous and current tick state so the
// behaviour reward of the last transition can be read back.
class Game {
 public:
  virtual ~Game() = default;

  virtual GameId id() const = 0;
  virtual ActionSpec action_spec() const = 0;
  // Seeds are per-subsystem streams derived from the environment root seed.
  virtual void reset(std::uint64_t layout_seed, std::uint64_t game_seed) = 0;
  virtual void tick(const Action& action, double dt) = 0;

  virtual double behaviour_reward() const = 0;
  virtual double score() const = 0;
  virtual double max_score() const = 0;
  virtual bool goal_reached() const = 0;
  virtual BehaviourBounds behaviour_bounds() const = 0;

  virtual Observation observe(double remaining_fraction) const = 0;
  // Number of distinct grid IDs; 0 when the observation has no grid.
  virtual int grid_id_count() const = 0;

  // Per-tick affect feature vector P (averaged over each window).
  virtual std::vector<double> affect_features() const = 0;
  virtual std::vector<std::string> affect_feature_names() const = 0;

  virtual std::unique_ptr<Game> clone() const = 0;
};

}  // namespace affectively
