#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "affectively/core/errors.hpp"
#include "affectively/core/rng.hpp"

namespace affectively {

// Multi-branch discrete choices plus continuous slots bounded to [-1, 1].
struct ActionSpec {
  std::vector<int> discrete_branches;
  int continuous_count = 0;

  bool operator==(const ActionSpec&) const = default;
};

struct Action {
  std::vector<int> discrete;
  std::vector<double> continuous;

  bool operator==(const Action&) const = default;
};

// Entity-ID grid (row-major, possibly empty) plus a real-valued property vector.
struct Observation {
  int rows = 0;
  int cols = 0;
  std::vector<int> grid;
  std::vector<double> properties;

  int at(int r, int c) const { return grid[static_cast<std::size_t>(r * cols + c)]; }
  int& at(int r, int c) { return grid[static_cast<std::size_t>(r * cols + c)]; }

  bool operator==(const Observation&) const = default;
};

struct StepResult {
  Observation observation;
  double score = 0.0;             // cumulative environment score R_E
  double behaviour_reward = 0.0;  // per-tick R_B
  double affect_signal = 0.0;     // Aff_t, zero between window boundaries
  double affect_reward = 0.0;     // R_A
  double total_reward = 0.0;      // blended R_t
  bool done = false;
  bool affect_emitted = false;    // a window closed on this tick and the model was queried
  int tick = 0;                   // clock tick index after this step

  bool operator==(const StepResult&) const = default;
};

inline void validate_spec(const ActionSpec& spec) {
  for (int n : spec.discrete_branches) {
    if (n < 2) throw ConfigError("action branch cardinality must be >= 2");
  }
  if (spec.continuous_count < 0) throw ConfigError("continuous_count must be >= 0");
}

inline void validate_action(const ActionSpec& spec, const Action& action) {
  if (action.discrete.size() != spec.discrete_branches.size()) {
    throw ValidationError("expected " + std::to_string(spec.discrete_branches.size()) +
                          " discrete indices, got " + std::to_string(action.discrete.size()));
  }
  if (action.continuous.size() != static_cast<std::size_t>(spec.continuous_count)) {
    throw ValidationError("expected " + std::to_string(spec.continuous_count) +
                          " continuous values, got " + std::to_string(action.continuous.size()));
  }
  for (std::size_t i = 0; i < action.discrete.size(); ++i) {
    if (action.discrete[i] < 0 || action.discrete[i] >= spec.discrete_branches[i]) {
      throw ValidationError("discrete index " + std::to_string(action.discrete[i]) +
                            " out of range for branch " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < action.continuous.size(); ++i) {
    const double v = action.continuous[i];
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
      throw ValidationError("continuous value " + std::to_string(v) + " in slot " +
                            std::to_string(i) + " outside [-1, 1]");
    }
  }
}

inline Action sample_action(const ActionSpec& spec, Rng& rng) {
  Action a;
  a.discrete.reserve(spec.discrete_branches.size());
  for (int n : spec.discrete_branches) a.discrete.push_back(rng.uniform_int(n));
  a.continuous.reserve(static_cast<std::size_t>(spec.continuous_count));
  for (int i = 0; i < spec.continuous_count; ++i) a.continuous.push_back(rng.uniform(-1.0, 1.0));
  return a;
}

// All-zero-effect action: the middle index of each 3-way branch, index 0 of
// 2-way branches, zero continuous values.
inline Action noop_action(const ActionSpec& spec) {
  Action a;
  for (int n : spec.discrete_branches) a.discrete.push_back(n == 3 ? 1 : 0);
  a.continuous.assign(static_cast<std::size_t>(spec.continuous_count), 0.0);
  return a;
}

// Branch index -> signed value for the 3-way (-1, 0, +1) branches.
inline constexpr int signed_choice(int index) { return index - 1; }

class EpisodeClock {
 public:
  static constexpr int kEpisodeSeconds = 120;
  static constexpr int kWindowSeconds = 3;

  explicit EpisodeClock(int ticks_per_second = 10) : ticks_per_second_(ticks_per_second) {
    if (ticks_per_second < 1) throw ConfigError("ticks_per_second must be >= 1");
  }

  int tick_index() const { return tick_index_; }
  int ticks_per_second() const { return ticks_per_second_; }
  int max_ticks() const { return ticks_per_second_ * kEpisodeSeconds; }
  int window_ticks() const { return ticks_per_second_ * kWindowSeconds; }
  double dt() const { return 1.0 / ticks_per_second_; }
  bool expired() const { return tick_index_ >= max_ticks(); }
  bool at_window_boundary() const { return tick_index_ > 0 && tick_index_ % window_ticks() == 0; }
  double remaining_fraction() const {
    return 1.0 - static_cast<double>(tick_index_) / static_cast<double>(max_ticks());
  }

  void reset() { tick_index_ = 0; }
  void advance() { ++tick_index_; }

 private:
  int ticks_per_second_;
  int tick_index_ = 0;
};

}  // namespace affectively
