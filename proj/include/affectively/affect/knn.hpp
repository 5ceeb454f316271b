#pragma once

// k-nearest-neighbour arousal-change model over a transition corpus.
//
// Neighbours are ranked by (squared distance, record index); records are
// stored in (session_id, window_index) order, so equal distances resolve to
// the earlier window. The KD-tree returns exactly the same k-set as a linear
// scan.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <vector>

#include "affectively/affect/corpus.hpp"

namespace affectively::affect {

struct Neighbour {
  std::size_t index = 0;
  double dist2 = 0.0;
};

inline bool neighbour_less(const Neighbour& a, const Neighbour& b) {
  return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
}

inline double squared_distance(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

// Inverse-distance weighted mean of the labels, neighbours in ascending order.
inline double weighted_label_mean(const std::vector<Neighbour>& nn, const TransitionCorpus& corpus, double guard) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& n : nn) {
    const double w = 1.0 / (std::sqrt(n.dist2) + guard);
    num += w * corpus.label(n.index);
    den += w;
  }
  return num / den;
}

class KdTree {
 public:
  static constexpr int kLeafSize = 8;

  KdTree() = default;

  KdTree(const double* points, std::size_t count, std::size_t dim) : points_(points), count_(count), dim_(dim) {
    order_.resize(count);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (count > 0) build(0, count);
  }

  std::vector<Neighbour> nearest(const double* query, std::size_t k) const {
    std::vector<Neighbour> heap;
    k = std::min(k, count_);
    if (k == 0) return heap;
    heap.reserve(k + 1);
    search(0, query, k, heap);
    std::sort_heap(heap.begin(), heap.end(), neighbour_less);
    return heap;
  }

 private:
  struct Node {
    int dim = -1;  // -1 marks a leaf
    double split = 0.0;
    int left = -1;
    int right = -1;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  int build(std::size_t begin, std::size_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({-1, 0.0, -1, -1, begin, end});
    if (end - begin <= kLeafSize) return id;
    // split on the widest dimension
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      double lo = points_[order_[begin] * dim_ + d];
      double hi = lo;
      for (std::size_t i = begin + 1; i < end; ++i) {
        const double v = points_[order_[i] * dim_ + d];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = d;
      }
    }
    if (!(best_spread > 0.0)) return id;  // all points coincide
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                       return points_[a * dim_ + best_dim] < points_[b * dim_ + best_dim];
                     });
    const double split = points_[order_[mid] * dim_ + best_dim];
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].dim = static_cast<int>(best_dim);
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void offer(std::vector<Neighbour>& heap, std::size_t k, Neighbour n) const {
    if (heap.size() < k) {
      heap.push_back(n);
      std::push_heap(heap.begin(), heap.end(), neighbour_less);
    } else if (neighbour_less(n, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), neighbour_less);
      heap.back() = n;
      std::push_heap(heap.begin(), heap.end(), neighbour_less);
    }
  }

  void search(int id, const double* q, std::size_t k, std::vector<Neighbour>& heap) const {
    const Node& node = nodes_[id];
    if (node.dim < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        offer(heap, k, {idx, squared_distance(q, points_ + idx * dim_, dim_)});
      }
      return;
    }
    // left holds coordinates <= split, right >= split
    const double diff = q[node.dim] - node.split;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search(near, q, k, heap);
    if (heap.size() < k || diff * diff <= heap.front().dist2) search(far, q, k, heap);
  }

  const double* points_ = nullptr;
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

// Immutable after construction; query() is safe from several threads.
class AffectModel {
 public:
  AffectModel(TransitionCorpus corpus, AffectModelConfig config)
      : corpus_(std::move(corpus)), config_(std::move(config)) {
    validate(config_);
    if (corpus_.size() == 0) throw CorpusError("affect model: empty corpus");
    if (config_.stats.mean.size() != corpus_.feature_count) {
      throw ConfigError("affect model: standardization stats do not match corpus feature length");
    }
    tree_ = KdTree(corpus_.embedded.data(), corpus_.size(), corpus_.dim());
  }

  AffectModel(const AffectModel&) = delete;
  AffectModel& operator=(const AffectModel&) = delete;

  // k nearest records of an already standardized transition vector. Uses all
  // records when the corpus is smaller than k.
  std::vector<Neighbour> neighbours(const std::vector<double>& embedded) const {
    if (embedded.size() != corpus_.dim()) throw FormatError("affect query: wrong embedded length");
    return tree_.nearest(embedded.data(), static_cast<std::size_t>(config_.k));
  }

  // Predicted arousal-increase value in [0, 1].
  double query(const std::vector<double>& prev_p, const std::vector<double>& cur_p) const {
    const auto e = embed_transition(prev_p, cur_p, config_.stats);
    queries_.fetch_add(1, std::memory_order_relaxed);
    return weighted_label_mean(neighbours(e), corpus_, config_.distance_guard);
  }

  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }
  void reset_query_count() const { queries_.store(0, std::memory_order_relaxed); }

  const TransitionCorpus& corpus() const { return corpus_; }
  const AffectModelConfig& config() const { return config_; }
  std::size_t feature_count() const { return corpus_.feature_count; }

 private:
  TransitionCorpus corpus_;
  AffectModelConfig config_;
  KdTree tree_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

inline std::shared_ptr<const AffectModel> make_affect_model(std::vector<Trace> sessions, AffectModelConfig config) {
  auto corpus = build_corpus(std::move(sessions), config);
  return std::make_shared<const AffectModel>(std::move(corpus), std::move(config));
}

}  // namespace affectively::affect
