#pragma once

// Report files:
//   report.csv  game,condition,n_runs,final_re_mean,final_re_ci95,mean_ra_mean,mean_ra_ci95
//   runs.csv    game,condition,run,seed,ticks,final_score,normalized_score,mean_affect,affect_values
//               (affect_values is a ';'-separated list, one entry per emission)
//   report.txt  aligned table, one row per condition, two columns per game
// Reals are written with 17 significant digits so they parse back exactly.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "affectively/affect/corpus.hpp"
#include "affectively/eval/harness.hpp"

namespace affectively::eval {

namespace detail {

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_num(const std::string& s, const std::string& where) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw FormatError(where + ": bad number '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s, const std::string& where) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw FormatError(where + ": bad integer '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string cell(double mean, double ci) {
  if (std::isnan(mean)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f +- %.3f", mean, ci);
  return buf;
}

}  // namespace detail

inline constexpr const char* kReportHeader =
    "game,condition,n_runs,final_re_mean,final_re_ci95,mean_ra_mean,mean_ra_ci95";
inline constexpr const char* kRunsHeader =
    "game,condition,run,seed,ticks,final_score,normalized_score,mean_affect,affect_values";

inline void write_report_csv(std::ostream& out, const std::vector<EvalRow>& rows) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.game) << ',' << to_string(r.condition) << ',' << r.n_runs << ',' << detail::num(r.final_re_mean)
        << ',' << detail::num(r.final_re_ci95) << ',' << detail::num(r.mean_ra_mean) << ','
        << detail::num(r.mean_ra_ci95) << '\n';
  }
}

inline std::vector<EvalRow> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::split(line, ',') != detail::split(kReportHeader, ',')) {
    throw FormatError("report csv: missing or wrong header");
  }
  std::vector<EvalRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = detail::split(line, ',');
    const std::string where = "report csv line " + std::to_string(line_no);
    if (c.size() != 7) throw FormatError(where + ": expected 7 fields");
    EvalRow r;
    r.game = parse_game_id(c[0]);
    r.condition = parse_condition(c[1]);
    r.n_runs = detail::parse_int<int>(c[2], where);
    r.final_re_mean = detail::parse_num(c[3], where);
    r.final_re_ci95 = detail::parse_num(c[4], where);
    r.mean_ra_mean = detail::parse_num(c[5], where);
    r.mean_ra_ci95 = detail::parse_num(c[6], where);
    rows.push_back(r);
  }
  return rows;
}

inline void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << kRunsHeader << '\n';
  for (const auto& r : runs) {
    out << to_string(r.game) << ',' << to_string(r.condition) << ',' << r.run << ',' << r.seed << ',' << r.ticks << ','
        << detail::num(r.final_score) << ',' << detail::num(r.normalized_score) << ',' << detail::num(r.mean_affect)
        << ',';
    for (std::size_t i = 0; i < r.affect_values.size(); ++i) {
      if (i) out << ';';
      out << detail::num(r.affect_values[i]);
    }
    out << '\n';
  }
}

inline std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::split(line, ',') != detail::split(kRunsHeader, ',')) {
    throw FormatError("runs csv: missing or wrong header");
  }
  std::vector<RunRecord> runs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = detail::split(line, ',');
    const std::string where = "runs csv line " + std::to_string(line_no);
    if (c.size() != 9) throw FormatError(where + ": expected 9 fields");
    RunRecord r;
    r.game = parse_game_id(c[0]);
    r.condition = parse_condition(c[1]);
    r.run = detail::parse_int<int>(c[2], where);
    r.seed = detail::parse_int<std::uint64_t>(c[3], where);
    r.ticks = detail::parse_int<int>(c[4], where);
    r.final_score = detail::parse_num(c[5], where);
    r.normalized_score = detail::parse_num(c[6], where);
    r.mean_affect = detail::parse_num(c[7], where);
    if (!c[8].empty()) {
      for (const auto& v : detail::split(c[8], ';')) r.affect_values.push_back(detail::parse_num(v, where));
    }
    runs.push_back(std::move(r));
  }
  return runs;
}

// Rebuilds every row from per-run records, grouped by (game, condition) in
// first-appearance order.
inline std::vector<EvalRow> recompute_rows(const std::vector<RunRecord>& runs) {
  std::vector<std::pair<GameId, Condition>> order;
  std::map<std::pair<GameId, Condition>, std::vector<RunRecord>> groups;
  for (const auto& r : runs) {
    const auto key = std::make_pair(r.game, r.condition);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(r);
  }
  std::vector<EvalRow> rows;
  for (const auto& key : order) rows.push_back(summarize_runs(key.first, key.second, groups[key]));
  return rows;
}

// Conditions as rows, games as column pairs (final R_E, mean R_A), in the
// order they first appear.
inline std::string format_table(const std::vector<EvalRow>& rows) {
  std::vector<GameId> games;
  std::vector<Condition> conds;
  for (const auto& r : rows) {
    if (std::find(games.begin(), games.end(), r.game) == games.end()) games.push_back(r.game);
    if (std::find(conds.begin(), conds.end(), r.condition) == conds.end()) conds.push_back(r.condition);
  }
  auto game_title = [](GameId g) {
    switch (g) {
      case GameId::Pirates: return std::string("Pirates");
      case GameId::Heist: return std::string("Heist");
      case GameId::SolidRally: return std::string("Solid Rally");
    }
    return std::string("?");
  };
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> head1{"Agent"}, head2{""};
  for (GameId g : games) {
    head1.push_back(game_title(g));
    head1.push_back("");
    head2.push_back("Final R_E");
    head2.push_back("mean R_A");
  }
  table.push_back(head1);
  table.push_back(head2);
  for (Condition c : conds) {
    std::vector<std::string> line{display_name(c)};
    for (GameId g : games) {
      auto it = std::find_if(rows.begin(), rows.end(), [&](const EvalRow& r) { return r.game == g && r.condition == c; });
      if (it == rows.end()) {
        line.push_back("");
        line.push_back("");
      } else {
        line.push_back(detail::cell(it->final_re_mean, it->final_re_ci95));
        line.push_back(detail::cell(it->mean_ra_mean, it->mean_ra_ci95));
      }
    }
    table.push_back(line);
  }
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  for (std::size_t li = 0; li < table.size(); ++li) {
    const auto& line = table[li];
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << (i ? " | " : "") << line[i] << std::string(width[i] - line[i].size(), ' ');
    }
    out << '\n';
    if (li == 1) {
      for (std::size_t i = 0; i < width.size(); ++i) out << (i ? "-+-" : "") << std::string(width[i], '-');
      out << '\n';
    }
  }
  return out.str();
}

struct ReportPaths {
  std::string report_csv;
  std::string runs_csv;
  std::string table_txt;
};

inline ReportPaths emit_report(const EvalReport& report, const std::string& dir) {
  if (report.rows.empty()) throw ConfigError("emit_report: report has no rows");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + dir + "': " + ec.message());
  ReportPaths p{dir + "/report.csv", dir + "/runs.csv", dir + "/report.txt"};
  auto open = [](const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return f;
  };
  {
    auto f = open(p.report_csv);
    write_report_csv(f, report.rows);
    if (!f) throw std::runtime_error("error writing '" + p.report_csv + "'");
  }
  {
    auto f = open(p.runs_csv);
    write_runs_csv(f, report.runs);
    if (!f) throw std::runtime_error("error writing '" + p.runs_csv + "'");
  }
  {
    auto f = open(p.table_txt);
    f << format_table(report.rows);
    if (!f) throw std::runtime_error("error writing '" + p.table_txt + "'");
  }
  return p;
}

inline EvalReport load_report(const std::string& dir) {
  EvalReport r;
  std::ifstream rc(dir + "/report.csv");
  if (!rc) throw FormatError("cannot open '" + dir + "/report.csv'");
  r.rows = read_report_csv(rc);
  std::ifstream runs(dir + "/runs.csv");
  if (runs) r.runs = read_runs_csv(runs);
  return r;
}

}  // namespace affectively::eval
