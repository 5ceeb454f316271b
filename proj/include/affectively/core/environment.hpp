#pragma once

// Gym-style episode wrapper: owns one game, the tick clock, the per-window
// affect schedule and the reward blend.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "affectively/affect/knn.hpp"
#include "affectively/affect/schedule.hpp"
#include "affectively/core/errors.hpp"
#include "affectively/core/game.hpp"
#include "affectively/core/rng.hpp"
#include "affectively/core/spaces.hpp"
#include "affectively/reward/blend.hpp"

namespace affectively {

class Environment {
 public:
  // With no model the affect signal is always zero. Blend bounds default to
  // the game's behaviour bounds.
  Environment(std::unique_ptr<Game> game, std::shared_ptr<const affect::AffectModel> model, double lambda,
              int ticks_per_second = 10)
      : game_(std::move(game)), model_(std::move(model)), clock_(ticks_per_second) {
    if (!game_) throw ConfigError("environment: null game");
    spec_ = game_->action_spec();
    validate_spec(spec_);
    blend_.lambda = lambda;
    blend_.behaviour_bounds = game_->behaviour_bounds();
    validate(blend_);
    const std::size_t n = game_->affect_feature_names().size();
    if (model_ && model_->feature_count() != n) {
      throw ConfigError("environment: corpus has " + std::to_string(model_->feature_count()) + " features, " +
                        to_string(game_->id()) + " produces " + std::to_string(n));
    }
    schedule_ = affect::AffectSchedule(clock_.window_ticks(), n);
  }

  Environment(const Environment& o)
      : game_(o.game_->clone()),
        model_(o.model_),
        clock_(o.clock_),
        spec_(o.spec_),
        blend_(o.blend_),
        schedule_(o.schedule_),
        queries_enabled_(o.queries_enabled_),
        started_(o.started_),
        done_(o.done_),
        seed_(o.seed_) {}

  Environment& operator=(const Environment&) = delete;

  Observation reset(std::uint64_t seed) {
    seed_ = seed;
    game_->reset(derive_seed(seed, streams::kLayout), derive_seed(seed, streams::kGame));
    clock_.reset();
    schedule_.reset();
    started_ = true;
    done_ = false;
    return game_->observe(clock_.remaining_fraction());
  }

  StepResult step(const Action& action) {
    if (!started_) throw LifecycleError("step() called before reset()");
    if (done_) throw LifecycleError("step() called on a finished episode; call reset() first");
    validate_action(spec_, action);
    game_->tick(action, clock_.dt());
    clock_.advance();

    StepResult r;
    r.tick = clock_.tick_index();
    r.behaviour_reward = game_->behaviour_reward();
    schedule_.accumulate(game_->affect_features());
    const affect::AffectModel* m = queries_enabled_ ? model_.get() : nullptr;
    r.affect_signal = schedule_.signal(r.tick, m, &r.affect_emitted);
    r.affect_reward = affect_reward(r.affect_signal);
    r.total_reward = blend(r.behaviour_reward, r.affect_reward, blend_);
    r.score = game_->score();
    done_ = clock_.expired() || game_->goal_reached();
    r.done = done_;
    r.observation = game_->observe(clock_.remaining_fraction());
    return r;
  }

  Action sample_action(Rng& rng) const { return affectively::sample_action(spec_, rng); }

  const ActionSpec& action_spec() const { return spec_; }
  GameId game_id() const { return game_->id(); }
  const Game& game() const { return *game_; }
  const EpisodeClock& clock() const { return clock_; }
  const BlendConfig& blend_config() const { return blend_; }
  double lambda() const { return blend_.lambda; }
  double max_score() const { return game_->max_score(); }
  int grid_id_count() const { return game_->grid_id_count(); }
  bool done() const { return done_; }
  bool started() const { return started_; }
  std::uint64_t seed() const { return seed_; }

  const std::shared_ptr<const affect::AffectModel>& affect_model() const { return model_; }
  // Training with lambda = 0 switches queries off so the corpus is never touched.
  void set_affect_queries(bool enabled) { queries_enabled_ = enabled; }
  bool affect_queries() const { return queries_enabled_ && model_ != nullptr; }

  Observation observe() const { return game_->observe(clock_.remaining_fraction()); }

 private:
  std::unique_ptr<Game> game_;
  std::shared_ptr<const affect::AffectModel> model_;
  EpisodeClock clock_;
  ActionSpec spec_;
  BlendConfig blend_;
  affect::AffectSchedule schedule_;
  bool queries_enabled_ = true;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t seed_ = 0;
};

// Flattened observation: one-hot grid cells (row-major, id_count slots each)
// followed by the property vector.
inline std::size_t flat_size(const Observation& o, int id_count) {
  return o.grid.size() * static_cast<std::size_t>(id_count) + o.properties.size();
}

inline void flatten_into(const Observation& o, int id_count, double* out) {
  const std::size_t g = o.grid.size() * static_cast<std::size_t>(id_count);
  std::fill(out, out + g, 0.0);
  for (std::size_t i = 0; i < o.grid.size(); ++i) {
    const int id = o.grid[i];
    if (id < 0 || id >= id_count) throw FormatError("observation: grid id " + std::to_string(id) + " out of range");
    out[i * static_cast<std::size_t>(id_count) + static_cast<std::size_t>(id)] = 1.0;
  }
  std::copy(o.properties.begin(), o.properties.end(), out + g);
}

inline std::vector<double> flatten(const Observation& o, int id_count) {
  std::vector<double> v(flat_size(o, id_count));
  flatten_into(o, id_count, v.data());
  return v;
}

}  // namespace affectively
