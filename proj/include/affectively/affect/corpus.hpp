#pragma once

// Arousal-annotated play traces and the transition corpus built from them.
//
// Corpus CSV: header `session_id,window_index,arousal,p_0,...,p_{n-1}`, one
// row per 3-second window. Rows of a session need not be contiguous; windows
// of a session are ordered by window_index and only index-adjacent windows
// form transitions.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "affectively/core/errors.hpp"

namespace affectively::affect {

struct FeatureWindow {
  std::int64_t session_id = 0;
  int window_index = 0;
  std::vector<double> features;  // P
  double mean_arousal = 0.0;

  bool operator==(const FeatureWindow&) const = default;
};

// One annotated session, windows in time order.
using Trace = std::vector<FeatureWindow>;

enum class ArousalLabel : int { Decrease = 0, Increase = 1 };

struct TransitionRecord {
  FeatureWindow prev;
  FeatureWindow cur;
  ArousalLabel label = ArousalLabel::Decrease;
};

struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;  // zero-variance features are stored as 1

  bool operator==(const Standardization&) const = default;
};

struct AffectModelConfig {
  int k = 5;
  double stable_epsilon = 1e-6;
  double distance_guard = 1e-6;    // added to every neighbour distance
  std::string distance = "euclidean";
  Standardization stats;           // filled by build_corpus
};

struct TransitionCorpus {
  std::size_t feature_count = 0;   // |P|
  std::vector<TransitionRecord> records;  // ordered by (session_id, window_index)
  // Standardized [prev_P, cur_P] per record, row-major records x (2 |P|).
  std::vector<double> embedded;
  std::size_t stable_discarded = 0;
  std::size_t session_count = 0;
  std::size_t window_count = 0;

  std::size_t size() const { return records.size(); }
  std::size_t dim() const { return 2 * feature_count; }
  const double* row(std::size_t i) const { return embedded.data() + i * dim(); }
  double label(std::size_t i) const { return records[i].label == ArousalLabel::Increase ? 1.0 : 0.0; }
};

inline void validate(const AffectModelConfig& c) {
  if (c.k < 1) throw ConfigError("affect model: k must be >= 1");
  if (c.stable_epsilon < 0) throw ConfigError("affect model: stable_epsilon must be >= 0");
  if (c.distance_guard <= 0) throw ConfigError("affect model: distance guard must be > 0");
  if (c.distance != "euclidean") throw ConfigError("affect model: unsupported distance '" + c.distance + "'");
}

inline Standardization compute_standardization(const std::vector<Trace>& sessions, std::size_t n) {
  Standardization s;
  s.mean.assign(n, 0.0);
  s.stddev.assign(n, 0.0);
  std::size_t count = 0;
  for (const auto& t : sessions) {
    for (const auto& w : t) {
      for (std::size_t j = 0; j < n; ++j) s.mean[j] += w.features[j];
      ++count;
    }
  }
  for (auto& m : s.mean) m /= static_cast<double>(count);
  for (const auto& t : sessions) {
    for (const auto& w : t) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = w.features[j] - s.mean[j];
        s.stddev[j] += d * d;
      }
    }
  }
  for (auto& sd : s.stddev) {
    sd = std::sqrt(sd / static_cast<double>(count));
    if (!(sd > 0.0)) sd = 1.0;
  }
  return s;
}

inline void standardize_into(const std::vector<double>& p, const Standardization& s, double* out) {
  for (std::size_t j = 0; j < p.size(); ++j) out[j] = (p[j] - s.mean[j]) / s.stddev[j];
}

// Concatenated standardized [prev_P, cur_P].
inline std::vector<double> embed_transition(const std::vector<double>& prev, const std::vector<double>& cur,
                                            const Standardization& s) {
  if (prev.size() != s.mean.size() || cur.size() != s.mean.size()) {
    throw FormatError("affect query: feature length " + std::to_string(prev.size()) + "/" +
                      std::to_string(cur.size()) + " does not match corpus length " +
                      std::to_string(s.mean.size()));
  }
  std::vector<double> out(2 * prev.size());
  standardize_into(prev, s, out.data());
  standardize_into(cur, s, out.data() + prev.size());
  return out;
}

// Labels every index-adjacent window pair by the sign of the mean-arousal
// change, drops stable pairs and standardizes features with statistics over
// all input windows. The statistics are written into config.stats.
inline TransitionCorpus build_corpus(std::vector<Trace> sessions, AffectModelConfig& config) {
  validate(config);
  if (sessions.empty()) throw CorpusError("affect corpus: no sessions");
  std::size_t n = 0;
  bool have_n = false;
  for (auto& t : sessions) {
    if (t.size() < 2) {
      throw FormatError("affect corpus: session " + (t.empty() ? std::string("?") : std::to_string(t.front().session_id)) +
                        " has fewer than 2 windows");
    }
    for (const auto& w : t) {
      if (!have_n) {
        n = w.features.size();
        have_n = true;
      } else if (w.features.size() != n) {
        throw FormatError("affect corpus: inconsistent feature length in session " + std::to_string(w.session_id) +
                          " (" + std::to_string(w.features.size()) + " vs " + std::to_string(n) + ")");
      }
    }
    std::stable_sort(t.begin(), t.end(),
                     [](const FeatureWindow& a, const FeatureWindow& b) { return a.window_index < b.window_index; });
  }
  if (n == 0) throw FormatError("affect corpus: feature vectors are empty");
  std::stable_sort(sessions.begin(), sessions.end(),
                   [](const Trace& a, const Trace& b) { return a.front().session_id < b.front().session_id; });

  TransitionCorpus corpus;
  corpus.feature_count = n;
  corpus.session_count = sessions.size();
  config.stats = compute_standardization(sessions, n);
  for (const auto& t : sessions) {
    corpus.window_count += t.size();
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i].window_index != t[i - 1].window_index + 1) continue;
      const double delta = t[i].mean_arousal - t[i - 1].mean_arousal;
      if (delta > config.stable_epsilon) {
        corpus.records.push_back({t[i - 1], t[i], ArousalLabel::Increase});
      } else if (delta < -config.stable_epsilon) {
        corpus.records.push_back({t[i - 1], t[i], ArousalLabel::Decrease});
      } else {
        ++corpus.stable_discarded;
      }
    }
  }
  if (corpus.records.empty()) throw CorpusError("affect corpus: empty after discarding stable transitions");
  corpus.embedded.resize(corpus.records.size() * corpus.dim());
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    double* out = corpus.embedded.data() + i * corpus.dim();
    standardize_into(corpus.records[i].prev.features, config.stats, out);
    standardize_into(corpus.records[i].cur.features, config.stats, out + n);
  }
  return corpus;
}

namespace detail {

inline double parse_double(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) {
    throw FormatError("corpus csv line " + std::to_string(line) + ": bad number '" + cell + "'");
  }
  return v;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::vector<Trace> read_corpus_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("corpus csv: empty input");
  const auto header = detail::split_csv(line);
  if (header.size() < 4 || header[0] != "session_id" || header[1] != "window_index" || header[2] != "arousal") {
    throw FormatError("corpus csv: header must be session_id,window_index,arousal,p_0,...");
  }
  const std::size_t n = header.size() - 3;
  std::map<std::int64_t, Trace> by_session;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != header.size()) {
      throw FormatError("corpus csv line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(cells.size()));
    }
    FeatureWindow w;
    w.session_id = static_cast<std::int64_t>(detail::parse_double(cells[0], line_no));
    w.window_index = static_cast<int>(detail::parse_double(cells[1], line_no));
    w.mean_arousal = detail::parse_double(cells[2], line_no);
    if (!(w.mean_arousal >= 0.0 && w.mean_arousal <= 1.0)) {
      throw FormatError("corpus csv line " + std::to_string(line_no) + ": arousal outside [0, 1]");
    }
    w.features.reserve(n);
    for (std::size_t j = 0; j < n; ++j) w.features.push_back(detail::parse_double(cells[3 + j], line_no));
    by_session[w.session_id].push_back(std::move(w));
  }
  std::vector<Trace> out;
  out.reserve(by_session.size());
  for (auto& [id, t] : by_session) {
    std::stable_sort(t.begin(), t.end(),
                     [](const FeatureWindow& a, const FeatureWindow& b) { return a.window_index < b.window_index; });
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<Trace> load_corpus_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("corpus csv: cannot open '" + path + "'");
  try {
    return read_corpus_csv(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_corpus_csv(std::ostream& out, const std::vector<Trace>& sessions) {
  std::size_t n = 0;
  for (const auto& t : sessions) {
    if (!t.empty()) {
      n = t.front().features.size();
      break;
    }
  }
  out << "session_id,window_index,arousal";
  for (std::size_t j = 0; j < n; ++j) out << ",p_" << j;
  out << '\n';
  for (const auto& t : sessions) {
    for (const auto& w : t) {
      out << w.session_id << ',' << w.window_index << ',' << detail::format_double(w.mean_arousal);
      for (double v : w.features) out << ',' << detail::format_double(v);
      out << '\n';
    }
  }
}

inline void save_corpus_csv(const std::string& path, const std::vector<Trace>& sessions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus '" + path + "'");
  write_corpus_csv(out, sessions);
  if (!out) throw std::runtime_error("error writing corpus '" + path + "'");
}

}  // namespace affectively::affect
