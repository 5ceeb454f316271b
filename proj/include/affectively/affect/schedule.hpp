#pragma once

// Per-episode window accumulator. Averages P over each window of
// window_ticks ticks and, once two windows have closed, queries the model on
// the (previous, current) averages at every boundary.

#include <cstddef>
#include <optional>
#include <vector>

#include "affectively/affect/knn.hpp"

namespace affectively::affect {

class AffectSchedule {
 public:
  AffectSchedule() = default;
  AffectSchedule(int window_ticks, std::size_t feature_count)
      : window_ticks_(window_ticks), sums_(feature_count, 0.0) {
    if (window_ticks < 1) throw ConfigError("affect schedule: window_ticks must be >= 1");
  }

  void reset() {
    std::fill(sums_.begin(), sums_.end(), 0.0);
    count_ = 0;
    previous_.reset();
    windows_closed_ = 0;
  }

  // Adds the features observed on the tick that just finished.
  void accumulate(const std::vector<double>& p) {
    if (p.size() != sums_.size()) throw FormatError("affect schedule: feature length mismatch");
    for (std::size_t j = 0; j < p.size(); ++j) sums_[j] += p[j];
    ++count_;
  }

  bool at_boundary(int tick_index) const { return tick_index > 0 && tick_index % window_ticks_ == 0; }

  // Call after accumulate() with the number of ticks elapsed. Returns the
  // affect signal for this tick: 0 mid-window and on the first boundary, the
  // model value on later boundaries. With no model the window still closes
  // but nothing is queried. Sets *emitted when a query happened.
  double signal(int tick_index, const AffectModel* model, bool* emitted = nullptr) {
    if (emitted) *emitted = false;
    if (!at_boundary(tick_index) || count_ == 0) return 0.0;
    std::vector<double> mean(sums_.size());
    for (std::size_t j = 0; j < sums_.size(); ++j) mean[j] = sums_[j] / static_cast<double>(count_);
    std::fill(sums_.begin(), sums_.end(), 0.0);
    count_ = 0;
    ++windows_closed_;
    double value = 0.0;
    if (previous_ && model) {
      value = model->query(*previous_, mean);
      if (emitted) *emitted = true;
    }
    previous_ = std::move(mean);
    return value;
  }

  int window_ticks() const { return window_ticks_; }
  int windows_closed() const { return windows_closed_; }
  const std::optional<std::vector<double>>& last_window() const { return previous_; }

 private:
  int window_ticks_ = 30;
  std::vector<double> sums_;
  int count_ = 0;
  std::optional<std::vector<double>> previous_;
  int windows_closed_ = 0;
};

}  // namespace affectively::affect
