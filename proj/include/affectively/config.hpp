#pragma once

// JSON configuration for environments and runs, plus the factories that turn
// a config into a game, an affect model and an Environment.
//
// {
//   "env": {"game": "pirates", "ticks_per_second": 10, "lambda": 0.5,
//           "corpus": "corpus.csv", "map": "", "generate_layout": false,
//           "reward": {...game reward parameters...},
//           "affect": {"k": 5, "stable_epsilon": 1e-6, "distance": "euclidean"}},
//   "train": {"total_steps": 100000, ...},
//   "seed": 0, "eval_runs": 30, "output_dir": "runs"
// }

#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "affectively/affect/knn.hpp"
#include "affectively/agents/ppo.hpp"
#include "affectively/core/environment.hpp"
#include "affectively/core/errors.hpp"
#include "affectively/games/heist.hpp"
#include "affectively/games/pirates.hpp"
#include "affectively/games/rally.hpp"

namespace affectively {

using json = nlohmann::json;

struct EnvConfig {
  GameId game = GameId::Pirates;
  int ticks_per_second = 10;
  double lambda = 0.0;
  std::string corpus_path;
  std::string map_path;
  bool generate_layout = false;
  pirates::RewardParams pirates_reward;
  heist::RewardParams heist_reward;
  rally::RewardParams rally_reward;
  affect::AffectModelConfig affect;
};

struct RunConfig {
  EnvConfig env;
  agents::TrainConfig train;
  std::uint64_t seed = 0;
  int eval_runs = 30;
  std::string output_dir;
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace detail

inline json reward_to_json(const EnvConfig& c) {
  switch (c.game) {
    case GameId::Pirates:
      return {{"move_right_bonus", c.pirates_reward.move_right_bonus},
              {"death_penalty", c.pirates_reward.death_penalty},
              {"coin_value", c.pirates_reward.coin_value},
              {"powerup_value", c.pirates_reward.powerup_value},
              {"max_score", c.pirates_reward.max_score}};
    case GameId::Heist:
      return {{"kill_value", c.heist_reward.kill_value},
              {"exploration_bonus", c.heist_reward.exploration_bonus},
              {"max_score", c.heist_reward.max_score},
              {"cube_edge", c.heist_reward.cube_edge}};
    case GameId::SolidRally:
      return {{"waypoint_value", c.rally_reward.waypoint_value},
              {"max_score", c.rally_reward.max_score},
              {"speed_norm", c.rally_reward.speed_norm}};
  }
  return json::object();
}

inline void reward_from_json(const json& j, EnvConfig& c) {
  const std::string w = "env.reward";
  switch (c.game) {
    case GameId::Pirates:
      detail::reject_unknown(j, {"move_right_bonus", "death_penalty", "coin_value", "powerup_value", "max_score"}, w);
      detail::read(j, "move_right_bonus", c.pirates_reward.move_right_bonus, w);
      detail::read(j, "death_penalty", c.pirates_reward.death_penalty, w);
      detail::read(j, "coin_value", c.pirates_reward.coin_value, w);
      detail::read(j, "powerup_value", c.pirates_reward.powerup_value, w);
      detail::read(j, "max_score", c.pirates_reward.max_score, w);
      break;
    case GameId::Heist:
      detail::reject_unknown(j, {"kill_value", "exploration_bonus", "max_score", "cube_edge"}, w);
      detail::read(j, "kill_value", c.heist_reward.kill_value, w);
      detail::read(j, "exploration_bonus", c.heist_reward.exploration_bonus, w);
      detail::read(j, "max_score", c.heist_reward.max_score, w);
      detail::read(j, "cube_edge", c.heist_reward.cube_edge, w);
      break;
    case GameId::SolidRally:
      detail::reject_unknown(j, {"waypoint_value", "max_score", "speed_norm"}, w);
      detail::read(j, "waypoint_value", c.rally_reward.waypoint_value, w);
      detail::read(j, "max_score", c.rally_reward.max_score, w);
      detail::read(j, "speed_norm", c.rally_reward.speed_norm, w);
      break;
  }
}

inline json to_json(const EnvConfig& c) {
  return {{"game", to_string(c.game)},
          {"ticks_per_second", c.ticks_per_second},
          {"lambda", c.lambda},
          {"corpus", c.corpus_path},
          {"map", c.map_path},
          {"generate_layout", c.generate_layout},
          {"reward", reward_to_json(c)},
          {"affect", {{"k", c.affect.k}, {"stable_epsilon", c.affect.stable_epsilon}, {"distance", c.affect.distance}}}};
}

inline json to_json(const agents::TrainConfig& t) {
  return {{"total_steps", t.total_steps},   {"clip", t.clip},
          {"gamma", t.gamma},               {"gae_lambda", t.gae_lambda},
          {"learning_rate", t.learning_rate}, {"rollout_length", t.rollout_length},
          {"epochs", t.epochs},             {"minibatch", t.minibatch},
          {"entropy_coef", t.entropy_coef}, {"value_coef", t.value_coef},
          {"max_grad_norm", t.max_grad_norm}, {"adam_epsilon", t.adam_epsilon},
          {"hidden", t.hidden}};
}

inline json to_json(const RunConfig& r) {
  return {{"env", to_json(r.env)},
          {"train", to_json(r.train)},
          {"seed", r.seed},
          {"eval_runs", r.eval_runs},
          {"output_dir", r.output_dir}};
}

inline EnvConfig env_config_from_json(const json& j) {
  const std::string w = "env";
  detail::reject_unknown(j, {"game", "ticks_per_second", "lambda", "corpus", "map", "generate_layout", "reward", "affect"}, w);
  EnvConfig c;
  if (j.contains("game")) {
    if (!j.at("game").is_string()) throw ConfigError("env.game: expected a string");
    c.game = parse_game_id(j.at("game").get<std::string>());
  }
  detail::read(j, "ticks_per_second", c.ticks_per_second, w);
  detail::read(j, "lambda", c.lambda, w);
  detail::read(j, "corpus", c.corpus_path, w);
  detail::read(j, "map", c.map_path, w);
  detail::read(j, "generate_layout", c.generate_layout, w);
  if (j.contains("reward")) reward_from_json(j.at("reward"), c);
  if (j.contains("affect")) {
    const json& a = j.at("affect");
    detail::reject_unknown(a, {"k", "stable_epsilon", "distance"}, "env.affect");
    detail::read(a, "k", c.affect.k, "env.affect");
    detail::read(a, "stable_epsilon", c.affect.stable_epsilon, "env.affect");
    detail::read(a, "distance", c.affect.distance, "env.affect");
  }
  return c;
}

inline agents::TrainConfig train_config_from_json(const json& j) {
  const std::string w = "train";
  detail::reject_unknown(j, {"total_steps", "clip", "gamma", "gae_lambda", "learning_rate", "rollout_length", "epochs",
                             "minibatch", "entropy_coef", "value_coef", "max_grad_norm", "adam_epsilon", "hidden"},
                         w);
  agents::TrainConfig t;
  detail::read(j, "total_steps", t.total_steps, w);
  detail::read(j, "clip", t.clip, w);
  detail::read(j, "gamma", t.gamma, w);
  detail::read(j, "gae_lambda", t.gae_lambda, w);
  detail::read(j, "learning_rate", t.learning_rate, w);
  detail::read(j, "rollout_length", t.rollout_length, w);
  detail::read(j, "epochs", t.epochs, w);
  detail::read(j, "minibatch", t.minibatch, w);
  detail::read(j, "entropy_coef", t.entropy_coef, w);
  detail::read(j, "value_coef", t.value_coef, w);
  detail::read(j, "max_grad_norm", t.max_grad_norm, w);
  detail::read(j, "adam_epsilon", t.adam_epsilon, w);
  detail::read(j, "hidden", t.hidden, w);
  return t;
}

inline RunConfig run_config_from_json(const json& j) {
  detail::reject_unknown(j, {"env", "train", "seed", "eval_runs", "output_dir"}, "config");
  RunConfig r;
  if (j.contains("env")) r.env = env_config_from_json(j.at("env"));
  if (j.contains("train")) r.train = train_config_from_json(j.at("train"));
  detail::read(j, "seed", r.seed, "config");
  detail::read(j, "eval_runs", r.eval_runs, "config");
  detail::read(j, "output_dir", r.output_dir, "config");
  return r;
}

inline void validate(const EnvConfig& c) {
  if (c.ticks_per_second < 1) throw ConfigError("env.ticks_per_second must be >= 1");
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) throw ConfigError("env.lambda must lie in [0, 1]");
  affect::validate(c.affect);
}

inline void validate(const RunConfig& r) {
  validate(r.env);
  agents::validate(r.train);
  if (r.eval_runs < 1) throw ConfigError("eval_runs must be >= 1");
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return run_config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::unique_ptr<Game> make_game(const EnvConfig& c) {
  switch (c.game) {
    case GameId::Pirates: {
      std::shared_ptr<const pirates::Level> level;
      if (!c.map_path.empty()) level = std::make_shared<const pirates::Level>(pirates::parse_level(read_text_file(c.map_path)));
      return std::make_unique<pirates::PiratesGame>(level, c.pirates_reward, pirates::PhysicsParams{}, c.generate_layout);
    }
    case GameId::Heist: {
      std::shared_ptr<const heist::Map> map;
      if (!c.map_path.empty()) map = std::make_shared<const heist::Map>(heist::parse_map(read_text_file(c.map_path)));
      return std::make_unique<heist::HeistGame>(map, c.heist_reward, heist::Params{}, c.generate_layout);
    }
    case GameId::SolidRally: {
      std::shared_ptr<const rally::Track> track;
      if (!c.map_path.empty()) track = std::make_shared<const rally::Track>(rally::parse_track(read_text_file(c.map_path)));
      return std::make_unique<rally::RallyGame>(track, c.rally_reward, rally::Params{}, c.generate_layout);
    }
  }
  throw ConfigError("unknown game");
}

// Loads and indexes the corpus named in the config; null when none is set.
inline std::shared_ptr<const affect::AffectModel> load_affect_model(const EnvConfig& c) {
  if (c.corpus_path.empty()) return nullptr;
  return affect::make_affect_model(affect::load_corpus_csv(c.corpus_path), c.affect);
}

inline std::unique_ptr<Environment> make_environment(const EnvConfig& c,
                                                     std::shared_ptr<const affect::AffectModel> model) {
  validate(c);
  if (c.lambda > 0.0 && !model) {
    throw ConfigError("lambda " + std::to_string(c.lambda) + " > 0 requires an affect corpus");
  }
  return std::make_unique<Environment>(make_game(c), std::move(model), c.lambda, c.ticks_per_second);
}

}  // namespace affectively
