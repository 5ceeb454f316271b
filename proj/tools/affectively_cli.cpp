// affectively: corpus tools, training, evaluation, the protocol server and
// environment inspection behind one command.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "affectively/affectively.hpp"

namespace fs = std::filesystem;
using namespace affectively;

namespace {

constexpr const char* kOutputDirEnv = "AFFECTIVELY_OUTPUT_DIR";
constexpr int kSyntheticSessions = 120;

// Flags shared by the subcommands that build environments. Anything the user
// passes overrides the value loaded from --config.
struct CommonFlags {
  std::string config_path;
  std::string game;
  double lambda = 0.0;
  std::string corpus;
  bool synthetic = false;
  int synthetic_sessions = kSyntheticSessions;
  std::string map;
  int tps = 10;
  std::uint64_t seed = 0;
  std::string out;

  CLI::Option* o_game = nullptr;
  CLI::Option* o_lambda = nullptr;
  CLI::Option* o_corpus = nullptr;
  CLI::Option* o_map = nullptr;
  CLI::Option* o_tps = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_out = nullptr;

  void add(CLI::App* app, bool with_lambda = true) {
    app->add_option("--config", config_path, "JSON run config; flags override its values")->check(CLI::ExistingFile);
    o_game = app->add_option("--game", game, "pirates | heist | solid");
    if (with_lambda) o_lambda = app->add_option("--lambda", lambda, "blend weight in [0, 1]");
    o_corpus = app->add_option("--corpus", corpus, "affect corpus CSV");
    app->add_flag("--synthetic-corpus", synthetic, "generate the synthetic corpus for the game from --seed");
    app->add_option("--synthetic-sessions", synthetic_sessions, "sessions in the synthetic corpus")
        ->check(CLI::PositiveNumber);
    o_map = app->add_option("--map", map, "level / map / track file replacing the shipped one");
    o_tps = app->add_option("--tps", tps, "ticks per second override");
    o_seed = app->add_option("--seed", seed, "root seed");
    o_out = app->add_option("--out", out, "output directory");
  }

  RunConfig resolve(bool allow_all = false) const {
    RunConfig rc = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (game == "all" && !allow_all) throw ConfigError("--game all is only accepted by eval");
    if (o_game && o_game->count() && game != "all") rc.env.game = parse_game_id(game);
    if (o_lambda && o_lambda->count()) rc.env.lambda = lambda;
    if (o_corpus && o_corpus->count()) rc.env.corpus_path = corpus;
    if (o_map && o_map->count()) rc.env.map_path = map;
    if (o_tps && o_tps->count()) rc.env.ticks_per_second = tps;
    if (o_seed && o_seed->count()) rc.seed = seed;
    if (o_out && o_out->count()) rc.output_dir = out;
    if (synthetic && !rc.env.corpus_path.empty()) throw ConfigError("--synthetic-corpus and --corpus are exclusive");
    return rc;
  }
};

std::string default_output_base() {
  const char* v = std::getenv(kOutputDirEnv);
  return v && *v ? std::string(v) : std::string("runs");
}

fs::path make_run_dir(const RunConfig& rc, const std::string& fallback_name) {
  fs::path dir = rc.output_dir.empty() ? fs::path(default_output_base()) / fallback_name : fs::path(rc.output_dir);
  fs::create_directories(dir);
  return dir;
}

// Writes the synthetic corpus into the run directory and points the config
// at it, so the snapshot alone reproduces the run.
void materialise_synthetic(EnvConfig& env, std::uint64_t seed, int sessions, const fs::path& dir) {
  const fs::path p = dir / ("corpus-" + to_string(env.game) + ".csv");
  affect::save_corpus_csv(p.string(), affect::generate_synthetic_corpus(env.game, seed, sessions));
  env.corpus_path = p.string();
}

void write_seeds(const fs::path& dir, const std::string& command, const RunConfig& rc, const json& extra) {
  json j{{"command", command}, {"seed", rc.seed}, {"layout_stream", streams::kLayout}, {"game_stream", streams::kGame}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  save_json((dir / "seeds.json").string(), j);
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

// ---- corpus ---------------------------------------------------------------

struct CorpusGenFlags {
  std::string game;
  int sessions = kSyntheticSessions;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_corpus_gen(const CorpusGenFlags& f) {
  const GameId g = parse_game_id(f.game);
  const auto traces = affect::generate_synthetic_corpus(g, f.seed, f.sessions);
  if (f.out.empty() || f.out == "-") {
    affect::write_corpus_csv(std::cout, traces);
  } else {
    if (fs::path(f.out).has_parent_path()) fs::create_directories(fs::path(f.out).parent_path());
    affect::save_corpus_csv(f.out, traces);
    std::size_t windows = 0;
    for (const auto& t : traces) windows += t.size();
    std::cout << "wrote " << traces.size() << " sessions, " << windows << " windows to " << f.out << '\n';
  }
  return 0;
}

struct CorpusStatsFlags {
  std::string corpus;
  std::string game;
  int k = 5;
  double stable_epsilon = 1e-6;
};

int cmd_corpus_stats(const CorpusStatsFlags& f) {
  auto traces = affect::load_corpus_csv(f.corpus);
  affect::AffectModelConfig cfg;
  cfg.k = f.k;
  cfg.stable_epsilon = f.stable_epsilon;
  affect::validate(cfg);
  const auto corpus = affect::build_corpus(traces, cfg);
  std::size_t inc = 0;
  for (const auto& r : corpus.records) inc += r.label == affect::ArousalLabel::Increase;
  std::vector<std::string> names;
  if (!f.game.empty()) {
    EnvConfig ec;
    ec.game = parse_game_id(f.game);
    names = make_game(ec)->affect_feature_names();
    if (names.size() != corpus.feature_count) {
      throw ConfigError(f.game + " has " + std::to_string(names.size()) + " affect features, corpus has " +
                        std::to_string(corpus.feature_count));
    }
  }
  std::cout << "sessions " << corpus.session_count << '\n'
            << "windows " << corpus.window_count << '\n'
            << "features " << corpus.feature_count << '\n'
            << "transitions " << corpus.size() << '\n'
            << "increase " << inc << '\n'
            << "decrease " << corpus.size() - inc << '\n'
            << "stable_discarded " << corpus.stable_discarded << '\n';
  for (std::size_t j = 0; j < corpus.feature_count; ++j) {
    const std::string name = names.empty() ? "p_" + std::to_string(j) : names[j];
    std::printf("feature %s mean %.6g std %.6g\n", name.c_str(), cfg.stats.mean[j], cfg.stats.stddev[j]);
  }
  return 0;
}

// ---- train ----------------------------------------------------------------

struct TrainFlags {
  CommonFlags common;
  long steps = 0;
  bool verbose = false;
  CLI::Option* o_steps = nullptr;
};

void write_training_logs(const fs::path& dir, const agents::TrainResult& r) {
  using eval::detail::num;
  {
    std::ofstream f(dir / "episodes.csv");
    f << "start_step,ticks,final_score,normalized_score,total_reward\n";
    for (const auto& e : r.episodes) {
      f << e.start_step << ',' << e.ticks << ',' << num(e.final_score) << ',' << num(e.normalized_score) << ','
        << num(e.total_reward) << '\n';
    }
  }
  std::ofstream f(dir / "updates.csv");
  f << "steps,policy_loss,value_loss,entropy,approx_kl,clip_fraction\n";
  for (const auto& u : r.updates) {
    f << u.steps << ',' << num(u.stats.mean_policy_loss) << ',' << num(u.stats.mean_value_loss) << ','
      << num(u.stats.mean_entropy) << ',' << num(u.stats.mean_approx_kl) << ',' << num(u.stats.mean_clip_fraction)
      << '\n';
  }
}

int cmd_train(const TrainFlags& f, const std::string& argline) {
  RunConfig rc = f.common.resolve();
  if (f.o_steps->count()) rc.train.total_steps = f.steps;
  validate(rc);
  const fs::path dir = make_run_dir(rc, "train-" + to_string(rc.env.game) + "-s" + std::to_string(rc.seed));
  if (f.common.synthetic) materialise_synthetic(rc.env, rc.seed, f.common.synthetic_sessions, dir);
  rc.output_dir = dir.string();
  // Snapshot before any work so a failed run still records what was attempted.
  save_json((dir / "config.json").string(), to_json(rc));
  write_seeds(dir, "train " + argline, rc,
              {{"init_seed", derive_seed(rc.seed, streams::kInit)},
               {"minibatch_seed", derive_seed(rc.seed, streams::kMinibatch)},
               {"episode_seed_stream", derive_seed(rc.seed, streams::kEpisodeSeeds)},
               {"agent_seed", derive_seed(rc.seed, streams::kAgent)}});

  auto model = load_affect_model(rc.env);
  auto env = make_environment(rc.env, model);
  agents::ProgressFn progress;
  if (f.verbose) {
    progress = [](const agents::TrainResult& r) {
      const auto& u = r.updates.back();
      double recent = 0.0;
      int n = 0;
      for (auto it = r.episodes.rbegin(); it != r.episodes.rend() && n < 10; ++it, ++n) recent += it->normalized_score;
      std::fprintf(stderr, "steps %ld episodes %zu recent_score %.4f policy %.4f value %.4f entropy %.4f kl %.5f\n",
                   u.steps, r.episodes.size(), n ? recent / n : 0.0, u.stats.mean_policy_loss,
                   u.stats.mean_value_loss, u.stats.mean_entropy, u.stats.mean_approx_kl);
    };
  }
  const auto result = agents::train(*env, rc.train, rc.seed, progress);
  write_training_logs(dir, result);
  agents::Checkpoint ck;
  ck.game = rc.env.game;
  ck.id_count = env->grid_id_count();
  ck.train = rc.train;
  ck.seed = rc.seed;
  ck.lambda = rc.env.lambda;
  ck.steps = result.steps;
  ck.model = result.model;
  const fs::path ck_path = dir / "checkpoint.json";
  agents::save_checkpoint(ck_path.string(), ck);
  double tail = 0.0;
  int n = 0;
  for (auto it = result.episodes.rbegin(); it != result.episodes.rend() && n < 10; ++it, ++n) tail += it->normalized_score;
  std::printf("trained %s lambda %.3g for %ld steps (%zu episodes, last-10 normalized score %.4f)\n",
              to_string(rc.env.game).c_str(), rc.env.lambda, result.steps, result.episodes.size(), n ? tail / n : 0.0);
  std::printf("checkpoint %s\n", ck_path.string().c_str());
  return 0;
}

// ---- eval -----------------------------------------------------------------

struct EvalFlags {
  CommonFlags common;
  std::string agent = "random";
  std::string checkpoint;
  int runs = 30;
  long steps = 0;
  bool verbose = false;
  CLI::Option* o_runs = nullptr;
  CLI::Option* o_steps = nullptr;
};

std::optional<eval::Condition> condition_for_lambda(double lambda) {
  for (eval::Condition c : eval::kAllConditions) {
    if (c != eval::Condition::Random && eval::lambda_of(c) == lambda) return c;
  }
  return std::nullopt;
}

int cmd_eval(const EvalFlags& f, const std::string& argline) {
  RunConfig rc = f.common.resolve(true);
  if (f.o_runs->count()) rc.eval_runs = f.runs;
  if (f.o_steps->count()) rc.train.total_steps = f.steps;

  std::optional<agents::Checkpoint> ck;
  std::vector<eval::Condition> conditions;
  if (f.agent == "ppo") {
    if (f.checkpoint.empty()) throw ConfigError("--agent ppo needs --checkpoint");
    ck = agents::load_checkpoint(f.checkpoint);
    if (f.common.o_game->count() && ck->game != rc.env.game) {
      throw ConfigError("checkpoint was trained on " + to_string(ck->game) + ", not " + to_string(rc.env.game));
    }
    rc.env.game = ck->game;
    auto c = condition_for_lambda(ck->lambda);
    if (!c) throw ConfigError("checkpoint lambda " + std::to_string(ck->lambda) + " matches no evaluated condition");
    conditions.push_back(*c);
  } else if (f.agent == "all") {
    conditions.assign(std::begin(eval::kAllConditions), std::end(eval::kAllConditions));
  } else {
    conditions.push_back(eval::parse_condition(f.agent));
  }
  std::vector<GameId> games;
  if (f.common.game == "all") {
    games.assign(std::begin(kAllGames), std::end(kAllGames));
  } else {
    games.push_back(rc.env.game);
  }
  validate(rc);

  std::string name = "eval-" + (games.size() > 1 ? std::string("all") : to_string(games[0])) + "-" + f.agent + "-s" +
                     std::to_string(rc.seed);
  const fs::path dir = make_run_dir(rc, name);
  const std::uint64_t eval_seed = eval::eval_seed_of(rc.seed);
  json run_seeds = json::array();
  for (int i = 0; i < rc.eval_runs; ++i) run_seeds.push_back(eval::run_seed(eval_seed, i));
  write_seeds(dir, "eval " + argline, rc, {{"eval_seed", eval_seed}, {"run_seeds", run_seeds}});

  eval::EvalReport report;
  for (GameId g : games) {
    RunConfig grc = rc;
    grc.env.game = g;
    grc.output_dir = dir.string();
    if (f.common.synthetic) materialise_synthetic(grc.env, rc.seed, f.common.synthetic_sessions, dir);
    save_json((dir / ("config-" + to_string(g) + ".json")).string(), to_json(grc));
    auto model = load_affect_model(grc.env);
    for (eval::Condition c : conditions) {
      if (f.verbose) std::fprintf(stderr, "%s / %s\n", to_string(g).c_str(), to_string(c).c_str());
      eval::ConditionResult res;
      if (ck) {
        EnvConfig ec = grc.env;
        ec.lambda = 0.0;  // R_A is measured from the model regardless of the reward weight
        auto env = make_environment(ec, model);
        if (env->grid_id_count() != ck->id_count) throw ConfigError("checkpoint grid id count does not match the game");
        agents::PpoPolicy policy(ck->model, ck->id_count);
        res.runs = eval::evaluate(policy, *env, grc.eval_runs, eval_seed, c);
        res.row = eval::summarize_runs(g, c, res.runs);
      } else {
        eval::ConditionSpec spec{grc.env, grc.train, grc.seed, grc.eval_runs};
        res = eval::run_condition(c, spec, model);
        if (res.model) {
          agents::Checkpoint out;
          out.game = g;
          out.id_count = make_game(grc.env)->grid_id_count();
          out.train = grc.train;
          out.seed = grc.seed;
          out.lambda = eval::lambda_of(c);
          out.steps = res.training.steps;
          out.model = res.model;
          agents::save_checkpoint((dir / ("checkpoint-" + to_string(g) + "-" + to_string(c) + ".json")).string(), out);
        }
      }
      const auto& r = res.row;
      std::printf("%s,%s,%d,%s,%s,%s,%s\n", to_string(g).c_str(), to_string(c).c_str(), r.n_runs,
                  eval::detail::num(r.final_re_mean).c_str(), eval::detail::num(r.final_re_ci95).c_str(),
                  eval::detail::num(r.mean_ra_mean).c_str(), eval::detail::num(r.mean_ra_ci95).c_str());
      std::fflush(stdout);
      report.rows.push_back(res.row);
      report.runs.insert(report.runs.end(), res.runs.begin(), res.runs.end());
    }
  }
  const auto paths = eval::emit_report(report, dir.string());
  std::fprintf(stderr, "report %s\n", paths.report_csv.c_str());
  return 0;
}

// ---- table ----------------------------------------------------------------

struct TableFlags {
  std::vector<std::string> dirs;
  bool csv = false;
};

int cmd_table(const TableFlags& f) {
  std::vector<eval::RunRecord> runs;
  for (const auto& d : f.dirs) {
    const auto rep = eval::load_report(d);
    runs.insert(runs.end(), rep.runs.begin(), rep.runs.end());
  }
  const auto rows = eval::recompute_rows(runs);
  if (f.csv) {
    eval::write_report_csv(std::cout, rows);
  } else {
    std::cout << eval::format_table(rows);
  }
  return 0;
}

// ---- serve ----------------------------------------------------------------

struct ServeFlags {
  CommonFlags common;
  std::string host = "127.0.0.1";
  int port = 0;
};

int cmd_serve(const ServeFlags& f) {
  RunConfig rc = f.common.resolve();
  validate(rc);
  std::shared_ptr<const affect::AffectModel> model;
  if (f.common.synthetic) {
    model = affect::make_affect_model(affect::generate_synthetic_corpus(rc.env.game, rc.seed, f.common.synthetic_sessions),
                                      rc.env.affect);
  } else {
    model = load_affect_model(rc.env);
  }
  const EnvConfig env_cfg = rc.env;
  make_environment(env_cfg, model);  // fail before listening on a bad config
  net::ServerOptions opts;
  opts.host = f.host;
  opts.port = static_cast<std::uint16_t>(f.port);

  // Handler threads inherit this mask; only the main thread takes the signal.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  net::Server server([env_cfg, model] { return make_environment(env_cfg, model); }, opts);
  server.start();
  std::printf("listening on %s:%u (%s, %s)\n", f.host.c_str(), server.port(), to_string(env_cfg.game).c_str(),
              net::kProtocolVersion);
  std::fflush(stdout);
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  std::printf("stopped after %zu connections\n", server.connections_accepted());
  return 0;
}

// ---- play-random ----------------------------------------------------------

struct PlayFlags {
  CommonFlags common;
  int ticks = 0;
  std::string trace;
  bool spec = false;
};

int cmd_play_random(const PlayFlags& f) {
  RunConfig rc = f.common.resolve();
  validate(rc);
  std::shared_ptr<const affect::AffectModel> model;
  if (f.common.synthetic) {
    model = affect::make_affect_model(affect::generate_synthetic_corpus(rc.env.game, rc.seed, f.common.synthetic_sessions),
                                      rc.env.affect);
  } else {
    model = load_affect_model(rc.env);
  }
  auto env = make_environment(rc.env, model);
  Observation obs = env->reset(rc.seed);
  if (f.spec) {
    const auto& s = env->action_spec();
    std::cout << "game " << to_string(env->game_id()) << '\n' << "discrete_branches";
    for (int b : s.discrete_branches) std::cout << ' ' << b;
    std::cout << '\n'
              << "continuous " << s.continuous_count << '\n'
              << "grid " << obs.rows << 'x' << obs.cols << " ids " << env->grid_id_count() << '\n'
              << "properties " << obs.properties.size() << '\n'
              << "flattened " << flat_size(obs, env->grid_id_count()) << '\n'
              << "max_ticks " << env->clock().max_ticks() << '\n'
              << "window_ticks " << env->clock().window_ticks() << '\n'
              << "max_score " << env->max_score() << '\n';
  }
  std::ofstream trace;
  if (!f.trace.empty()) {
    trace.open(f.trace);
    if (!trace) throw std::runtime_error("cannot write trace '" + f.trace + "'");
    trace << "tick,score,behaviour_reward,affect_signal,affect_reward,total_reward,affect_emitted,done\n";
  }
  Rng rng(derive_seed(rc.seed, streams::kAgent));
  StepResult r;
  double affect_sum = 0.0, reward_sum = 0.0;
  int emissions = 0;
  using eval::detail::num;
  do {
    r = env->step(env->sample_action(rng));
    reward_sum += r.total_reward;
    if (r.affect_emitted) {
      ++emissions;
      affect_sum += r.affect_signal;
    }
    if (trace.is_open()) {
      trace << r.tick << ',' << num(r.score) << ',' << num(r.behaviour_reward) << ',' << num(r.affect_signal) << ','
            << num(r.affect_reward) << ',' << num(r.total_reward) << ',' << int(r.affect_emitted) << ',' << int(r.done)
            << '\n';
    }
  } while (!r.done && (f.ticks <= 0 || r.tick < f.ticks));
  std::printf("game %s seed %llu ticks %d score %g normalized %.4f total_reward %.4f emissions %d", to_string(env->game_id()).c_str(),
              static_cast<unsigned long long>(rc.seed), r.tick, r.score, r.score / env->max_score(), reward_sum, emissions);
  if (emissions > 0) std::printf(" mean_affect %.4f", affect_sum / emissions);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affect-driven RL environments: corpus tools, training, evaluation and the protocol server"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("affectively 1.0 (") + net::kProtocolVersion + ")");
  const std::string argline = join_args(argc, argv);

  auto* corpus = app.add_subcommand("corpus", "synthetic corpus generation and corpus statistics");
  corpus->require_subcommand(1);
  CorpusGenFlags gen;
  auto* gen_cmd = corpus->add_subcommand("gen", "write a synthetic affect corpus CSV");
  gen_cmd->add_option("--game", gen.game, "pirates | heist | solid")->required();
  gen_cmd->add_option("--sessions", gen.sessions, "number of sessions")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--out", gen.out, "output CSV (stdout when omitted)");
  CorpusStatsFlags stats;
  auto* stats_cmd = corpus->add_subcommand("stats", "summarise a corpus CSV");
  stats_cmd->add_option("--corpus", stats.corpus, "corpus CSV")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--game", stats.game, "label features with this game's names");
  stats_cmd->add_option("--k", stats.k, "neighbours");
  stats_cmd->add_option("--stable-epsilon", stats.stable_epsilon, "arousal change treated as stable");

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "train a PPO agent and write a checkpoint");
  train.common.add(train_cmd);
  train.o_steps = train_cmd->add_option("--steps", train.steps, "total environment steps");
  train_cmd->add_flag("-v,--verbose", train.verbose, "print one line per update to stderr");

  EvalFlags ev;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate agents and write the report");
  ev.common.add(eval_cmd, false);
  eval_cmd->add_option("--agent", ev.agent, "random | ppo | max-behaviour | blended | max-arousal | all");
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "checkpoint for --agent ppo")->check(CLI::ExistingFile);
  ev.o_runs = eval_cmd->add_option("--runs", ev.runs, "evaluation episodes per condition")->check(CLI::PositiveNumber);
  ev.o_steps = eval_cmd->add_option("--steps", ev.steps, "training steps for PPO conditions");
  eval_cmd->add_flag("-v,--verbose", ev.verbose, "print progress to stderr");

  TableFlags table;
  auto* table_cmd = app.add_subcommand("table", "print the results table from one or more eval directories");
  table_cmd->add_option("dirs", table.dirs, "eval output directories")->required()->check(CLI::ExistingDirectory);
  table_cmd->add_flag("--csv", table.csv, "print report CSV instead of the aligned table");

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "expose an environment over TCP");
  serve.common.add(serve_cmd);
  serve_cmd->add_option("--host", serve.host, "bind address");
  serve_cmd->add_option("--port", serve.port, "port (0 picks a free one)")->check(CLI::Range(0, 65535));

  PlayFlags play;
  auto* play_cmd = app.add_subcommand("play-random", "play one episode with uniform random actions");
  play.common.add(play_cmd);
  play_cmd->add_option("--ticks", play.ticks, "stop after this many ticks");
  play_cmd->add_option("--trace", play.trace, "per-tick CSV trace");
  play_cmd->add_flag("--spec", play.spec, "print the action and observation spec first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return 2;
  }

  try {
    if (gen_cmd->parsed()) return cmd_corpus_gen(gen);
    if (stats_cmd->parsed()) return cmd_corpus_stats(stats);
    if (train_cmd->parsed()) return cmd_train(train, argline);
    if (eval_cmd->parsed()) return cmd_eval(ev, argline);
    if (table_cmd->parsed()) return cmd_table(table);
    if (serve_cmd->parsed()) return cmd_serve(serve);
    if (play_cmd->parsed()) return cmd_play_random(play);
  } catch (const std::exception& e) {
    std::cerr << "affectively: error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
