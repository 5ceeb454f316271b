#pragma once

#include <memory>
#include <string>

#include "affectively/agents/actor_critic.hpp"
#include "affectively/core/environment.hpp"
#include "affectively/core/spaces.hpp"

namespace affectively::agents {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const Observation& obs, Rng& rng) = 0;
  virtual std::string name() const = 0;
};

// Uniform over the action space; the observation is ignored.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(ActionSpec spec) : spec_(std::move(spec)) {}
  Action act(const Observation&, Rng& rng) override { return sample_action(spec_, rng); }
  std::string name() const override { return "random"; }

 private:
  ActionSpec spec_;
};

// Samples from the trained distribution (deterministic = argmax / tanh(mean)).
class PpoPolicy final : public Policy {
 public:
  PpoPolicy(std::shared_ptr<const ActorCritic> model, int id_count, bool deterministic = false)
      : model_(std::move(model)), id_count_(id_count), deterministic_(deterministic) {}

  Action act(const Observation& obs, Rng& rng) override {
    flatten_buffer_.resize(flat_size(obs, id_count_));
    flatten_into(obs, id_count_, flatten_buffer_.data());
    if (deterministic_) return model_->act_deterministic(flatten_buffer_);
    return model_->act(flatten_buffer_, rng).action;
  }
  std::string name() const override { return "ppo"; }
  const ActorCritic& model() const { return *model_; }

 private:
  std::shared_ptr<const ActorCritic> model_;
  int id_count_;
  bool deterministic_;
  std::vector<double> flatten_buffer_;
};

}  // namespace affectively::agents
