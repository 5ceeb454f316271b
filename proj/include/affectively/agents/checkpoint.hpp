#pragma once

// Policy checkpoint: one JSON document.
//   {"format": "affectively-checkpoint", "version": 1, "game": "pirates",
//    "obs_dim": 733, "id_count": 6,
//    "action_spec": {"discrete": [3, 2], "continuous": 0},
//    "hidden": [64, 64], "train": {...}, "seed": 7, "steps": 100352,
//    "params": [...]}
// Parameters are stored in the flat ActorCritic order: policy MLP, value
// MLP, then log-stddevs.

#include <fstream>
#include <memory>
#include <string>

#include "affectively/agents/actor_critic.hpp"
#include "affectively/config.hpp"

namespace affectively::agents {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  GameId game = GameId::Pirates;
  int id_count = 0;
  TrainConfig train;
  std::uint64_t seed = 0;
  double lambda = 0.0;  // blend weight the policy was trained with
  long steps = 0;
  std::shared_ptr<ActorCritic> model;
};

inline json checkpoint_to_json(const Checkpoint& c) {
  const ActorCritic& m = *c.model;
  return {{"format", "affectively-checkpoint"},
          {"version", kCheckpointVersion},
          {"game", to_string(c.game)},
          {"obs_dim", m.obs_dim()},
          {"id_count", c.id_count},
          {"action_spec", {{"discrete", m.spec().discrete_branches}, {"continuous", m.spec().continuous_count}}},
          {"hidden", m.hidden()},
          {"train", to_json(c.train)},
          {"seed", c.seed},
          {"lambda", c.lambda},
          {"steps", c.steps},
          {"params", m.params()}};
}

inline Checkpoint checkpoint_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "affectively-checkpoint") throw FormatError("checkpoint: unknown format");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw FormatError("checkpoint: version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kCheckpointVersion) + ")");
    }
    Checkpoint c;
    c.game = parse_game_id(j.at("game").get<std::string>());
    c.id_count = j.at("id_count").get<int>();
    c.train = train_config_from_json(j.at("train"));
    c.seed = j.at("seed").get<std::uint64_t>();
    c.lambda = j.at("lambda").get<double>();
    c.steps = j.at("steps").get<long>();
    ActionSpec spec{j.at("action_spec").at("discrete").get<std::vector<int>>(),
                    j.at("action_spec").at("continuous").get<int>()};
    c.model = std::make_shared<ActorCritic>(j.at("obs_dim").get<int>(), spec, j.at("hidden").get<std::vector<int>>());
    auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != c.model->param_count()) {
      throw FormatError("checkpoint: " + std::to_string(params.size()) + " parameters, network needs " +
                        std::to_string(c.model->param_count()));
    }
    c.model->params() = std::move(params);
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

inline void save_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  out << checkpoint_to_json(c).dump() << '\n';
  if (!out) throw std::runtime_error("error writing checkpoint '" + path + "'");
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open checkpoint '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  try {
    return checkpoint_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace affectively::agents
