#pragma once

// The four agent conditions of the protocol: train (unless Random), then
// evaluate n_runs stochastic episodes of the single resulting policy.

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "affectively/agents/policy.hpp"
#include "affectively/agents/ppo.hpp"
#include "affectively/config.hpp"
#include "affectively/eval/stats.hpp"

namespace affectively::eval {

enum class Condition { Random, MaxBehaviour, Blended, MaxArousal };

inline constexpr Condition kAllConditions[] = {Condition::Random, Condition::MaxBehaviour, Condition::Blended,
                                               Condition::MaxArousal};

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::Random: return "random";
    case Condition::MaxBehaviour: return "max-behaviour";
    case Condition::Blended: return "blended";
    case Condition::MaxArousal: return "max-arousal";
  }
  return "unknown";
}

inline std::string display_name(Condition c) {
  switch (c) {
    case Condition::Random: return "Random";
    case Condition::MaxBehaviour: return "Max. Behaviour";
    case Condition::Blended: return "Blended";
    case Condition::MaxArousal: return "Max. Arousal";
  }
  return "unknown";
}

inline Condition parse_condition(const std::string& s) {
  if (s == "random") return Condition::Random;
  if (s == "max-behaviour" || s == "max-behavior" || s == "behaviour" || s == "behavior") return Condition::MaxBehaviour;
  if (s == "blended") return Condition::Blended;
  if (s == "max-arousal" || s == "arousal") return Condition::MaxArousal;
  throw ConfigError("unknown agent condition '" + s + "' (expected random, max-behaviour, blended or max-arousal)");
}

inline double lambda_of(Condition c) {
  switch (c) {
    case Condition::Random: return 0.0;
    case Condition::MaxBehaviour: return 0.0;
    case Condition::Blended: return 0.5;
    case Condition::MaxArousal: return 1.0;
  }
  return 0.0;
}

struct RunRecord {
  GameId game = GameId::Pirates;
  Condition condition = Condition::Random;
  int run = 0;
  std::uint64_t seed = 0;
  int ticks = 0;
  double final_score = 0.0;
  double normalized_score = 0.0;
  double mean_affect = std::numeric_limits<double>::quiet_NaN();  // mean over emission ticks
  std::vector<double> affect_values;                                // one per emission

  bool operator==(const RunRecord& o) const {
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return game == o.game && condition == o.condition && run == o.run && seed == o.seed && ticks == o.ticks &&
           final_score == o.final_score && normalized_score == o.normalized_score &&
           same(mean_affect, o.mean_affect) && affect_values == o.affect_values;
  }
};

struct EvalRow {
  GameId game = GameId::Pirates;
  Condition condition = Condition::Random;
  int n_runs = 0;
  double final_re_mean = 0.0;
  double final_re_ci95 = 0.0;
  double mean_ra_mean = std::numeric_limits<double>::quiet_NaN();
  double mean_ra_ci95 = std::numeric_limits<double>::quiet_NaN();

  bool operator==(const EvalRow& o) const {
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return game == o.game && condition == o.condition && n_runs == o.n_runs && same(final_re_mean, o.final_re_mean) &&
           same(final_re_ci95, o.final_re_ci95) && same(mean_ra_mean, o.mean_ra_mean) &&
           same(mean_ra_ci95, o.mean_ra_ci95);
  }
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<RunRecord> runs;
};

inline std::uint64_t run_seed(std::uint64_t eval_seed, int run) {
  return derive_seed(eval_seed, static_cast<std::uint64_t>(run));
}

// Full episodes with the policy's own sampling. Run i resets with
// run_seed(seed, i) and draws actions from a stream of that seed, so each
// run is reproducible on its own.
inline std::vector<RunRecord> evaluate(agents::Policy& policy, Environment& env, int n_runs, std::uint64_t seed,
                                       Condition condition = Condition::Random) {
  std::vector<RunRecord> out;
  for (int i = 0; i < n_runs; ++i) {
    RunRecord rec;
    rec.game = env.game_id();
    rec.condition = condition;
    rec.run = i;
    rec.seed = run_seed(seed, i);
    Rng rng(derive_seed(rec.seed, streams::kAgent));
    Observation obs = env.reset(rec.seed);
    StepResult r;
    do {
      r = env.step(policy.act(obs, rng));
      if (r.affect_emitted) rec.affect_values.push_back(r.affect_signal);
      obs = std::move(r.observation);
    } while (!r.done);
    rec.ticks = r.tick;
    rec.final_score = r.score;
    rec.normalized_score = std::clamp(r.score / env.max_score(), 0.0, 1.0);
    if (!rec.affect_values.empty()) rec.mean_affect = mean_of(rec.affect_values);
    out.push_back(std::move(rec));
  }
  return out;
}

inline EvalRow summarize_runs(GameId game, Condition condition, const std::vector<RunRecord>& runs) {
  std::vector<double> re, ra;
  for (const auto& r : runs) {
    re.push_back(r.normalized_score);
    ra.push_back(r.mean_affect);
  }
  EvalRow row;
  row.game = game;
  row.condition = condition;
  row.n_runs = static_cast<int>(runs.size());
  const Summary s_re = summarize(re);
  row.final_re_mean = s_re.mean;
  row.final_re_ci95 = s_re.ci95;
  const Summary s_ra = summarize(ra);
  if (s_ra.n > 0) {
    row.mean_ra_mean = s_ra.mean;
    row.mean_ra_ci95 = s_ra.ci95;
  }
  return row;
}

struct ConditionSpec {
  EnvConfig env;            // lambda is replaced by the condition's
  agents::TrainConfig train;
  std::uint64_t seed = 0;   // training seed; evaluation uses derive_seed(seed, kEval)
  int n_runs = 30;
};

struct ConditionResult {
  EvalRow row;
  std::vector<RunRecord> runs;
  std::shared_ptr<agents::ActorCritic> model;  // null for Random
  agents::TrainResult training;
};

inline std::uint64_t eval_seed_of(std::uint64_t seed) { return derive_seed(seed, streams::kEval); }

// The model is used for the blended reward during training (lambda > 0) and
// to measure R_A during evaluation; without one, R_A columns are NaN.
inline ConditionResult run_condition(Condition condition, const ConditionSpec& spec,
                                     std::shared_ptr<const affect::AffectModel> model,
                                     const agents::ProgressFn& progress = nullptr) {
  EnvConfig env_cfg = spec.env;
  env_cfg.lambda = lambda_of(condition);
  if (env_cfg.lambda > 0.0 && !model) {
    throw ConfigError("condition " + to_string(condition) + " needs an affect corpus");
  }
  auto env = make_environment(env_cfg, model);
  ConditionResult out;
  std::unique_ptr<agents::Policy> policy;
  if (condition == Condition::Random) {
    policy = std::make_unique<agents::RandomPolicy>(env->action_spec());
  } else {
    out.training = agents::train(*env, spec.train, spec.seed, progress);
    out.model = out.training.model;
    policy = std::make_unique<agents::PpoPolicy>(out.model, env->grid_id_count());
  }
  out.runs = evaluate(*policy, *env, spec.n_runs, eval_seed_of(spec.seed), condition);
  out.row = summarize_runs(env_cfg.game, condition, out.runs);
  return out;
}

}  // namespace affectively::eval
