// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance [--out DIR] [--only N[,N...]]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "affectively/affectively.hpp"

using namespace affectively;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string g3(double v) { return fmt("%.4g", v); }

std::unique_ptr<Game> game_of(GameId g) {
  EnvConfig c;
  c.game = g;
  return make_game(c);
}

// Collects failures; the first few go into the detail text.
struct Checker {
  int checks = 0;
  int failures = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (notes.size() < 4) notes.push_back(what);
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    expect(std::abs(got - want) <= tol, what + " got " + fmt("%.17g", got) + " want " + fmt("%.17g", want));
  }
  Outcome outcome(const std::string& summary) const {
    std::string d = summary + " (" + std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks)";
    for (const auto& n : notes) d += "; " + n;
    return {failures == 0 && checks > 0, d};
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd =
      std::string(AFFECTIVELY_CLI_PATH) + " " + args + " > \"" + stdout_file.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---- 1 -------------------------------------------------------------------

Outcome reward_formulas() {
  Checker c;
  {
    using namespace pirates;
    Rng rng(1);
    const auto lv = std::make_shared<const Level>(parse_level(".S.o.*X\n#######\n"));
    const PiratesState prev = initial_state(lv, rng);
    PiratesState cur = prev;
    c.near(pirates_behaviour_reward(prev, cur), 0.0, 1e-12, "pirates idle");
    cur.last_dx = 0.6;
    c.near(pirates_behaviour_reward(prev, cur), 0.1, 1e-12, "pirates move right");
    cur.coins = 1;
    c.near(pirates_behaviour_reward(prev, cur), 10.0 + 0.1, 1e-12, "pirates coin");
    cur.coins = 0;
    cur.powerups = 1;
    c.near(pirates_behaviour_reward(prev, cur), 20.0 + 0.1, 1e-12, "pirates power-up");
    cur.powerups = 0;
    cur.deaths = 1;
    c.near(pirates_behaviour_reward(prev, cur), -5.0 + 0.1, 1e-12, "pirates death while moving");
    cur.last_dx = -0.6;
    c.near(pirates_behaviour_reward(prev, cur), -5.0, 1e-12, "pirates death");
    cur.deaths = 0;
    cur.coins = 2;
    cur.powerups = 1;
    cur.last_dx = 0.0;
    c.near(pirates_behaviour_reward(prev, cur), 40.0, 1e-12, "pirates two coins and a power-up");

    // Scripted: two ticks right at 6 tiles/s reach the coin one tile away.
    PiratesState s = initial_state(std::make_shared<const Level>(parse_level(".S.o..X\n#######\n")), rng);
    PiratesState a = pirates_tick(s, {{2, 0}, {}}, 0.1);
    c.near(pirates_behaviour_reward(s, a), 0.1, 1e-12, "pirates scripted step");
    PiratesState b = pirates_tick(a, {{2, 0}, {}}, 0.1);
    c.near(pirates_behaviour_reward(a, b), 10.1, 1e-12, "pirates scripted coin");
  }
  {
    using namespace heist;
    Rng rng(1);
    const auto m = std::make_shared<const Map>(
        parse_map("size 30 30 5\nenemy 20 15 1.5\nenemy 25 15 1.5\nspawn 10 15 1.5 0\n"));
    const HeistState prev = initial_state(m, rng);
    HeistState cur = prev;
    c.near(heist_behaviour_reward(prev, cur), 1.0, 1e-12, "heist facing the turret");
    cur.enemies[0].alive = false;
    cur.kills = 1;
    cur.visited_count = prev.visited_count + 1;
    c.near(heist_behaviour_reward(prev, cur), 20.0 + 1.0 + 1.0, 1e-12, "heist kill + new cube + facing");
    cur = prev;
    cur.yaw = kPi;
    c.near(heist_behaviour_reward(prev, cur), -1.0, 1e-12, "heist facing away");
    cur.yaw = kPi / 4;
    c.near(heist_behaviour_reward(prev, cur), 0.5, 1e-12, "heist quarter turn");
    cur.yaw = -kPi / 2;
    cur.visited_count = prev.visited_count + 1;
    c.near(heist_behaviour_reward(prev, cur), 1.0, 1e-12, "heist new cube, side-on");
    cur = prev;
    for (auto& e : cur.enemies) e.alive = false;
    c.near(heist_behaviour_reward(cur, cur), 0.0, 1e-12, "heist nothing alive");
  }
  {
    using namespace rally;
    const auto track = std::make_shared<const Track>(default_track());
    const RallyState prev = initial_state(track);
    RallyState cur = prev;
    const Vec2 w = track->points[static_cast<std::size_t>(track->waypoints[0])];
    const double bearing = std::atan2(w.y - cur.position.y, w.x - cur.position.x);
    cur.speed = 10.0;
    cur.heading = bearing - kPi / 2;
    c.near(rally_behaviour_reward(prev, cur), 0.5 * 0.5, 1e-12, "rally half speed, side-on");
    cur.heading = bearing;
    c.near(rally_behaviour_reward(prev, cur), 0.5, 1e-12, "rally half speed, on target");
    cur.speed = 20.0;
    cur.waypoints_passed = 1;
    c.near(rally_behaviour_reward(prev, cur), 1.0 + 1.0, 1e-12, "rally waypoint at full speed");
    cur = prev;
    cur.heading = bearing + kPi;
    c.near(rally_behaviour_reward(prev, cur), 0.0, 1e-12, "rally stopped, facing away");
  }
  return c.outcome("Pirates/Heist/Solid hand-computed values at 1e-12");
}

// ---- 2 -------------------------------------------------------------------

Outcome blend_properties() {
  Checker c;
  Rng rng(2);
  for (GameId g : kAllGames) {
    const auto b = game_of(g)->behaviour_bounds();
    for (int i = 0; i < 20000; ++i) {
      const double rb = rng.uniform(b.min, b.max);
      const double ra = rng.uniform();
      const double l = rng.uniform();
      const double n = normalize_behaviour(rb, b);
      const double r0 = blend(rb, ra, {0.0, b});
      const double r1 = blend(rb, ra, {1.0, b});
      const double rl = blend(rb, ra, {l, b});
      c.expect(n >= 0.0 && n <= 1.0, "n(R_B) outside [0,1]");
      c.expect(r0 == n, "lambda 0 is not n(R_B)");
      c.expect(r1 == ra, "lambda 1 is not R_A");
      c.near(rl, (1 - l) * r0 + l * r1, 1e-12, "affine in lambda");
    }
    // Per-tick rewards from play, through the environment.
    affect::AffectModelConfig cfg;
    auto model = affect::make_affect_model(affect::generate_synthetic_corpus(g, 1, 40), cfg);
    for (double l : {0.0, 0.5, 1.0}) {
      Environment env(game_of(g), model, l);
      Rng arng(3);
      env.reset(7);
      StepResult r;
      do {
        r = env.step(env.sample_action(arng));
        const double n = normalize_behaviour(r.behaviour_reward, b);
        c.expect(n >= 0.0 && n <= 1.0, "tick n(R_B) outside [0,1]");
        c.near(r.total_reward, (1 - l) * n + l * r.affect_reward, 1e-12, to_string(g) + " tick total");
      } while (!r.done);
    }
  }
  return c.outcome("affine in lambda, exact at 0 and 1, n in [0,1]");
}

// ---- 3 -------------------------------------------------------------------

std::vector<affect::Trace> random_corpus(Rng& rng, std::size_t transitions, std::size_t dim, bool ties) {
  std::vector<affect::Trace> out;
  std::size_t left = transitions;
  std::int64_t id = 0;
  auto value = [&] { return ties ? std::round(rng.uniform(-2.0, 2.0)) : rng.uniform(-3.0, 3.0); };
  while (left > 0) {
    const std::size_t t = std::min<std::size_t>(left, 1 + rng.uniform_int(60));
    affect::Trace tr;
    for (std::size_t w = 0; w <= t; ++w) {
      std::vector<double> p(dim);
      for (auto& v : p) v = value();
      // distinct arousal levels so no pair is stable
      tr.push_back({id, static_cast<int>(w), p, 0.05 + 0.9 * rng.uniform() + 1e-3 * static_cast<double>(w % 2)});
      if (w > 0 && std::abs(tr[w].mean_arousal - tr[w - 1].mean_arousal) <= 1e-6) tr[w].mean_arousal += 0.01;
    }
    out.push_back(std::move(tr));
    left -= t;
    ++id;
  }
  return out;
}

Outcome knn_oracle() {
  Checker c;
  Rng rng(3);
  std::size_t min_size = SIZE_MAX, max_size = 0;
  for (int corpus = 0; corpus < 1000; ++corpus) {
    const auto n = static_cast<std::size_t>(std::round(std::exp(rng.uniform(std::log(10.0), std::log(1e4)))));
    const std::size_t dim = 1 + rng.uniform_int(6);
    const bool ties = corpus % 4 == 0;
    auto sessions = random_corpus(rng, n, dim, ties);
    affect::AffectModelConfig cfg;
    const auto model = affect::make_affect_model(sessions, cfg);
    const auto& tc = model->corpus();
    min_size = std::min(min_size, tc.size());
    max_size = std::max(max_size, tc.size());
    for (int q = 0; q < 5; ++q) {
      std::vector<double> prev(dim), cur(dim);
      for (auto& v : prev) v = ties ? std::round(rng.uniform(-2.0, 2.0)) : rng.uniform(-3.0, 3.0);
      for (auto& v : cur) v = ties ? std::round(rng.uniform(-2.0, 2.0)) : rng.uniform(-3.0, 3.0);
      const auto& st = model->config().stats;
      std::vector<double> e;
      for (auto* p : {&prev, &cur})
        for (std::size_t j = 0; j < dim; ++j) e.push_back(((*p)[j] - st.mean[j]) / st.stddev[j]);
      // Exhaustive scan, ties broken by corpus order.
      std::vector<std::pair<double, std::size_t>> all;
      for (std::size_t i = 0; i < tc.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < e.size(); ++j) s += (tc.row(i)[j] - e[j]) * (tc.row(i)[j] - e[j]);
        all.push_back({s, i});
      }
      std::sort(all.begin(), all.end());
      const std::size_t k = std::min<std::size_t>(5, all.size());
      double num = 0.0, den = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        const double w = 1.0 / (std::sqrt(all[m].first) + 1e-6);
        num += w * (tc.records[all[m].second].label == affect::ArousalLabel::Increase ? 1.0 : 0.0);
        den += w;
      }
      const auto nn = model->neighbours(e);
      bool same = nn.size() == k;
      for (std::size_t m = 0; same && m < k; ++m) same = nn[m].index == all[m].second;
      c.expect(same, "neighbour set differs (corpus " + std::to_string(corpus) + ")");
      c.near(model->query(prev, cur), num / den, 1e-12, "query (corpus " + std::to_string(corpus) + ")");
    }
  }
  return c.outcome("1000 corpora, sizes " + std::to_string(min_size) + "-" + std::to_string(max_size));
}

// ---- 4 -------------------------------------------------------------------

Outcome affect_schedule() {
  Checker c;
  int max_emissions = 0;
  for (GameId g : kAllGames) {
    affect::AffectModelConfig cfg;
    auto model = affect::make_affect_model(affect::generate_synthetic_corpus(g, 4, 40), cfg);
    Environment env(game_of(g), model, 1.0, 10);
    c.expect(env.clock().max_ticks() == 1200, "120 s at 10 Hz is 1200 ticks");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(seed);
      env.reset(seed);
      int emissions = 0;
      StepResult r;
      do {
        r = env.step(env.sample_action(rng));
        const bool boundary = r.tick % 30 == 0;
        if (r.affect_emitted) ++emissions;
        c.expect(!r.affect_emitted || boundary, "emission off a 30-tick boundary");
        c.expect(r.affect_signal == 0.0 || boundary, "nonzero affect between windows");
        c.expect(r.affect_reward == 0.0 || boundary, "nonzero affect reward between windows");
      } while (!r.done);
      c.expect(r.tick == 1200, "episode runs 120 s");
      c.expect(emissions <= 39, "more than 39 emissions");
      max_emissions = std::max(max_emissions, emissions);
    }
  }
  return c.outcome("emissions only at ticks % 30 == 0, max " + std::to_string(max_emissions) + " per episode");
}

// ---- 5 -------------------------------------------------------------------

Outcome random_baseline() {
  Checker c;
  std::string d;
  for (GameId g : kAllGames) {
    eval::ConditionSpec spec;
    spec.env.game = g;
    spec.seed = 5;
    spec.n_runs = 30;
    const auto r = eval::run_condition(eval::Condition::Random, spec, nullptr);
    c.expect(r.row.n_runs == 30, "30 runs");
    c.expect(r.row.final_re_mean < 0.1, to_string(g) + " mean " + g3(r.row.final_re_mean));
    d += (d.empty() ? "" : ", ") + to_string(g) + " " + g3(r.row.final_re_mean);
  }
  return c.outcome("random mean normalized R_E: " + d + " (need < 0.1)");
}

// ---- 6, 7, 9 share two full eval invocations -----------------------------

struct FullEval {
  fs::path dir_a, dir_b;
  int code_a = -1, code_b = -1;
  double seconds = 0.0;
  std::vector<eval::EvalRow> rows;
  std::string error;
};

FullEval& full_eval(const fs::path& out) {
  static FullEval fe;
  static bool done = false;
  if (done) return fe;
  done = true;
  fe.dir_a = out / "eval_a";
  fe.dir_b = out / "eval_b";
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [dir, code] : {std::pair{fe.dir_a, &fe.code_a}, std::pair{fe.dir_b, &fe.code_b}}) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    *code = run_cli("eval --game all --agent all --synthetic-corpus --runs 30 --steps 100000 --seed 1 --out \"" +
                        dir.string() + "\"",
                    dir / "stdout.txt");
  }
  fe.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    if (fe.code_a == 0) fe.rows = eval::recompute_rows(eval::load_report(fe.dir_a.string()).runs);
    else fe.error = "eval exited with " + std::to_string(fe.code_a);
  } catch (const std::exception& e) {
    fe.error = e.what();
  }
  return fe;
}

const eval::EvalRow* find_row(const std::vector<eval::EvalRow>& rows, GameId g, eval::Condition c) {
  for (const auto& r : rows)
    if (r.game == g && r.condition == c) return &r;
  return nullptr;
}

Outcome behaviour_learning(const fs::path& out) {
  const FullEval& fe = full_eval(out);
  if (!fe.error.empty()) return {false, fe.error};
  Checker c;
  std::string d;
  for (GameId g : kAllGames) {
    const auto* mb = find_row(fe.rows, g, eval::Condition::MaxBehaviour);
    const auto* rnd = find_row(fe.rows, g, eval::Condition::Random);
    c.expect(mb && rnd, to_string(g) + " rows missing");
    if (!mb || !rnd) continue;
    c.expect(mb->n_runs == 30 && rnd->n_runs == 30, "30 evaluation runs");
    if (g == GameId::Heist) {
      c.expect(mb->final_re_mean >= rnd->final_re_mean, "heist behaviour below random");
    } else {
      c.expect(mb->final_re_mean >= 2.0 * rnd->final_re_mean, to_string(g) + " below 2x random");
      c.expect(mb->final_re_mean - mb->final_re_ci95 > rnd->final_re_mean + rnd->final_re_ci95,
               to_string(g) + " CIs overlap");
    }
    d += (d.empty() ? "" : ", ") + to_string(g) + " " + g3(mb->final_re_mean) + "+-" + g3(mb->final_re_ci95) +
         " vs " + g3(rnd->final_re_mean) + "+-" + g3(rnd->final_re_ci95);
  }
  return c.outcome("max-behaviour vs random R_E: " + d);
}

Outcome arousal_maximization(const fs::path& out) {
  const FullEval& fe = full_eval(out);
  if (!fe.error.empty()) return {false, fe.error};
  Checker c;
  std::string d;
  for (GameId g : kAllGames) {
    const auto* ma = find_row(fe.rows, g, eval::Condition::MaxArousal);
    const auto* rnd = find_row(fe.rows, g, eval::Condition::Random);
    c.expect(ma && rnd, to_string(g) + " rows missing");
    if (!ma || !rnd) continue;
    const double gap = ma->mean_ra_mean - rnd->mean_ra_mean;
    c.expect(gap >= 0.1, to_string(g) + " gap " + g3(gap));
    d += (d.empty() ? "" : ", ") + to_string(g) + " " + g3(ma->mean_ra_mean) + " vs " + g3(rnd->mean_ra_mean);
  }
  return c.outcome("max-arousal vs random mean R_A (gap >= 0.1): " + d);
}

// ---- 8 -------------------------------------------------------------------

Outcome ppo_gradient() {
  using namespace agents;
  Checker c;
  // Toy mixed policy; a few samples pushed past the clip range.
  ActorCritic toy(4, {{3, 2}, 2}, {5, 3});
  Rng rng(8);
  toy.init(rng);
  for (double& p : toy.params()) p += 0.3 * rng.normal();
  const int n = 12;
  ActorCritic::Batch b;
  b.obs.resize(4, n);
  b.pre_squash.resize(2, n);
  Vector old_lp(n), adv(n), ret(n);
  const double shift[n] = {0.5, -0.03, -0.4, 0.02, -0.6, 0.3, 0.0, 0.1, -0.1, 0.6, 0.05, -0.5};
  for (int i = 0; i < n; ++i) {
    std::vector<double> x(4);
    for (auto& v : x) v = rng.normal();
    const PolicySample s = toy.act(x, rng);
    b.obs.col(i) = Eigen::Map<const Vector>(x.data(), 4);
    b.discrete.push_back(s.action.discrete[0]);
    b.discrete.push_back(s.action.discrete[1]);
    b.pre_squash(0, i) = s.pre_squash[0];
    b.pre_squash(1, i) = s.pre_squash[1];
    old_lp[i] = s.log_prob + shift[i];
    adv[i] = rng.normal();
    ret[i] = rng.normal();
  }
  TrainConfig cfg;
  std::vector<double> grad(toy.param_count(), 0.0);
  ppo_loss(toy, b, old_lp, adv, ret, cfg, &grad);
  double worst = 0.0;
  const double h = 1e-6;
  for (std::size_t i = 0; i < toy.param_count(); ++i) {
    const double keep = toy.params()[i];
    toy.params()[i] = keep + h;
    const double up = ppo_loss(toy, b, old_lp, adv, ret, cfg, nullptr).total;
    toy.params()[i] = keep - h;
    const double down = ppo_loss(toy, b, old_lp, adv, ret, cfg, nullptr).total;
    toy.params()[i] = keep;
    const double fd = (up - down) / (2 * h);
    const double rel = std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-3});
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-4, "param " + std::to_string(i) + " relative error " + g3(rel));
  }

  // Ratio at unchanged parameters on real rollouts.
  double worst_ratio = 0.0;
  std::size_t samples = 0;
  for (GameId g : kAllGames) {
    Environment env(game_of(g), nullptr, 0.0);
    const Observation o = env.reset(0);
    ActorCritic m(static_cast<int>(flat_size(o, env.grid_id_count())), env.action_spec(), {64, 64});
    Rng init(derive_seed(9, streams::kInit));
    m.init(init);
    RolloutCollector col(env, 9);
    std::vector<EpisodeLog> eps;
    const Rollout r = col.collect(m, 2048, 0, eps);
    const auto e = m.evaluate({r.obs, r.discrete, r.pre_squash});
    for (int i = 0; i < r.log_prob.size(); ++i) {
      const double ratio = std::exp(e.log_prob[i] - r.log_prob[i]);
      worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
      c.expect(std::abs(ratio - 1.0) <= 1e-12, to_string(g) + " ratio " + fmt("%.17g", ratio));
      ++samples;
    }
  }
  return c.outcome("max relative gradient error " + g3(worst) + ", max |ratio-1| " + g3(worst_ratio) + " over " +
                   std::to_string(samples) + " rollout samples");
}

// ---- 9 -------------------------------------------------------------------

Outcome determinism(const fs::path& out) {
  const FullEval& fe = full_eval(out);
  Checker c;
  c.expect(fe.code_a == 0 && fe.code_b == 0, "eval exit codes " + std::to_string(fe.code_a) + "/" + std::to_string(fe.code_b));
  // Directory names appear in config snapshots and the recorded command line.
  auto normalized = [](const fs::path& file, const fs::path& dir) {
    std::string s = slurp(file);
    const std::string needle = dir.string();
    for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p)) s.replace(p, needle.size(), "@");
    return s;
  };
  int files = 0;
  std::set<std::string> names_a, names_b;
  if (fs::exists(fe.dir_a))
    for (const auto& e : fs::directory_iterator(fe.dir_a)) names_a.insert(e.path().filename().string());
  if (fs::exists(fe.dir_b))
    for (const auto& e : fs::directory_iterator(fe.dir_b)) names_b.insert(e.path().filename().string());
  c.expect(names_a == names_b && !names_a.empty(), "different file sets");
  for (const auto& name : names_a) {
    if (!names_b.count(name)) continue;
    c.expect(normalized(fe.dir_a / name, fe.dir_a) == normalized(fe.dir_b / name, fe.dir_b), name + " differs");
    ++files;
  }
  // Trajectories: per-tick traces from the CLI and in-process replays.
  const fs::path t = out / "traces";
  fs::create_directories(t);
  for (GameId g : kAllGames) {
    const std::string game = to_string(g);
    for (const char* k : {"a", "b"}) {
      run_cli("play-random --game " + game + " --synthetic-corpus --lambda 0.5 --seed 11 --trace \"" +
                  (t / (game + "_" + k + ".csv")).string() + "\"",
              t / (game + "_" + k + ".txt"));
    }
    const std::string ta = slurp(t / (game + "_a.csv"));
    c.expect(!ta.empty() && ta == slurp(t / (game + "_b.csv")), game + " trace differs");
    affect::AffectModelConfig cfg;
    auto model = affect::make_affect_model(affect::generate_synthetic_corpus(g, 11, 40), cfg);
    Environment e1(game_of(g), model, 0.5), e2(game_of(g), model, 0.5);
    Rng r1(11), r2(11);
    e1.reset(11);
    e2.reset(11);
    bool same = true;
    StepResult a;
    do {
      a = e1.step(e1.sample_action(r1));
      same = same && a == e2.step(e2.sample_action(r2));
    } while (!a.done);
    c.expect(same, game + " in-process replay differs");
  }
  return c.outcome(std::to_string(files) + " output files identical across two full eval invocations (" +
                   fmt("%.0f", fe.seconds) + " s), traces identical");
}

// ---- 10 ------------------------------------------------------------------

Outcome protocol_equivalence() {
  Checker c;
  std::size_t steps = 0;
  for (GameId g : kAllGames) {
    affect::AffectModelConfig cfg;
    std::shared_ptr<const affect::AffectModel> model =
        affect::make_affect_model(affect::generate_synthetic_corpus(g, 10, 40), cfg);
    net::Server server([g, model] { return std::make_unique<Environment>(game_of(g), model, 0.5); });
    server.start();
    net::RemoteEnvironment remote("127.0.0.1", server.port());
    Environment local(game_of(g), model, 0.5);
    for (std::uint64_t seed : {1ull, 2ull}) {
      c.expect(remote.reset(seed) == local.reset(seed), "reset observation differs");
      Rng rng(seed);
      StepResult r;
      do {
        const Action a = local.sample_action(rng);
        r = local.step(a);
        const StepResult q = remote.step(a);
        c.expect(q == r, to_string(g) + " tick " + std::to_string(r.tick) + " differs");
        ++steps;
      } while (!r.done);
    }
    remote.close();
    server.stop();
  }
  return c.outcome(std::to_string(steps) + " remote steps equal local StepResults field-for-field");
}

// ---- 11 ------------------------------------------------------------------

// Whole cells overlapped by the pirate's box, solid or not.
bool pirate_overlaps_solid(const pirates::PiratesState& s, double h) {
  const double e = 1e-9;
  for (int col = static_cast<int>(std::floor(s.x - h)) - 1; col <= static_cast<int>(std::floor(s.x + h)) + 1; ++col) {
    for (int row = static_cast<int>(std::floor(s.y - h)) - 1; row <= static_cast<int>(std::floor(s.y + h)) + 1; ++row) {
      const bool overlap = s.x + h > col + e && s.x - h < col + 1 - e && s.y + h > row + e && s.y - h < row + 1 - e;
      if (overlap && pirates::is_solid(s, col, row)) return true;
    }
  }
  return false;
}

Outcome fuzz_invariants() {
  Checker c;
  const BehaviourBounds bounds[] = {bounds::kPirates, bounds::kHeist, bounds::kSolidRally};
  std::string d;
  for (GameId g : kAllGames) {
    Environment env(game_of(g), nullptr, 0.0);
    const BehaviourBounds b = bounds[static_cast<int>(g)];
    Rng rng(11 + static_cast<std::uint64_t>(g));
    long ticks = 0;
    int episodes = 0;
    int bad_reward = 0, bad_score = 0, bad_state = 0;
    while (ticks < 100000) {
      env.reset(static_cast<std::uint64_t>(episodes++));
      double last_score = 0.0;
      int last_passed = 0;
      StepResult r;
      do {
        r = env.step(env.sample_action(rng));
        ++ticks;
        if (r.behaviour_reward < b.min - 1e-12 || r.behaviour_reward > b.max + 1e-12) ++bad_reward;
        if (r.score < last_score) ++bad_score;
        last_score = r.score;
        if (g == GameId::Pirates) {
          const auto& pg = dynamic_cast<const pirates::PiratesGame&>(env.game());
          if (pirate_overlaps_solid(pg.state(), pirates::PhysicsParams{}.half_extent)) ++bad_state;
        } else if (g == GameId::Heist) {
          const auto& hg = dynamic_cast<const heist::HeistGame&>(env.game());
          const auto& s = hg.state();
          if (s.ammo < 0 || s.ammo > 11) ++bad_state;
          if (hg.map().blocked_at(s.position.x, s.position.y)) ++bad_state;
        } else {
          const auto& rg = dynamic_cast<const rally::RallyGame&>(env.game());
          const auto& s = rg.state();
          const int step = s.waypoints_passed - last_passed;
          if (step < 0 || step > 1) ++bad_state;
          if (s.next_waypoint_index != s.waypoints_passed % rally::kWaypointCount) ++bad_state;
          if (rg.track().centerline_distance(s.position) > rg.track().half_width() + 1e-9) ++bad_state;
          last_passed = s.waypoints_passed;
        }
      } while (!r.done && ticks < 100000);
    }
    c.expect(bad_reward == 0, to_string(g) + " R_B out of bounds x" + std::to_string(bad_reward));
    c.expect(bad_score == 0, to_string(g) + " score decreased x" + std::to_string(bad_score));
    c.expect(bad_state == 0, to_string(g) + " state invariant broken x" + std::to_string(bad_state));
    d += (d.empty() ? "" : ", ") + to_string(g) + " " + std::to_string(ticks) + " ticks/" + std::to_string(episodes) + " episodes";
  }
  return c.outcome(d);
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = fs::temp_directory_path() / "affectively_acceptance";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      out = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string t; std::getline(ss, t, ',');) only.insert(std::stoi(t));
    } else {
      std::cerr << "usage: acceptance [--out DIR] [--only N[,N...]]\n";
      return 2;
    }
  }
  fs::create_directories(out);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"reward formula exactness", reward_formulas},
      {"blend properties", blend_properties},
      {"knn oracle equivalence", knn_oracle},
      {"affect schedule", affect_schedule},
      {"random baseline below 0.1", random_baseline},
      {"behaviour learning beats random", [&] { return behaviour_learning(out); }},
      {"arousal maximization beats random", [&] { return arousal_maximization(out); }},
      {"ppo gradient check", ppo_gradient},
      {"determinism", [&] { return determinism(out); }},
      {"protocol equivalence", protocol_equivalence},
      {"environment invariants fuzz", fuzz_invariants},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  if (fs::exists(out / "eval_a" / "report.txt")) std::printf("table: %s\n", (out / "eval_a" / "report.txt").c_str());
  return failed == 0 ? 0 : 1;
}
