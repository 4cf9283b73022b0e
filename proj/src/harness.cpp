#include "rfx/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rfx/dp.hpp"
#include "rfx/errors.hpp"
#include "rfx/instances.hpp"
#include "rfx/io.hpp"
#include "rfx/parallel.hpp"
#include "rfx/rmax.hpp"

namespace rfx {

namespace {

using ojson = nlohmann::ordered_json;

// Substream salts for the per-trial phases.
constexpr std::uint64_t kInstancePhase = 1;
constexpr std::uint64_t kExplorePhase = 2;
constexpr std::uint64_t kRewardPhase = 3;
constexpr std::uint64_t kBaselinePhase = 4;

constexpr int kDefaultN0 = 1000;
constexpr std::int64_t kDefaultN = 100000;

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

TabularMdp resolve_instance(const ExperimentConfig& cfg, int trial) {
  const InstanceSpec& spec = cfg.instance;
  if (spec.family == "toy") return toy_significance_mdp();
  if (spec.family == "file") {
    if (spec.path.empty()) {
      throw ValidationError("instance family \"file\" needs a path");
    }
    return read_mdp(spec.path);
  }
  if (spec.family == "random") {
    Rng rng = Rng(cfg.seed).split(kInstancePhase).split(
        static_cast<std::uint64_t>(trial));
    return random_mdp(spec.num_states, spec.num_actions, spec.horizon,
                      spec.concentration, rng);
  }
  throw ValidationError("unknown instance family \"" + spec.family + "\"");
}

RegretLearnerConfig learner_config(const ExperimentConfig& cfg,
                                   const TabularMdp& truth) {
  RegretLearnerConfig lc;
  lc.bonus_scale = cfg.bonus_scale;
  lc.failure_prob = cfg.failure_prob;
  if (cfg.learner == "bernstein") {
    lc.kind = RegretLearnerConfig::Kind::kBernstein;
  } else if (cfg.learner == "hoeffding") {
    lc.kind = RegretLearnerConfig::Kind::kHoeffding;
  } else if (cfg.learner == "oracle") {
    lc.kind = RegretLearnerConfig::Kind::kOracleOptimal;
    lc.oracle_mdp = &truth;
  } else {
    throw ValidationError("unknown learner \"" + cfg.learner + "\"");
  }
  return lc;
}

PlanOptions plan_options(const ExperimentConfig& cfg) {
  PlanOptions opts;
  opts.epsilon = cfg.epsilon;
  if (cfg.solver == "vi") {
    opts.solver = PlanSolver::kValueIteration;
  } else if (cfg.solver == "npg") {
    opts.solver = PlanSolver::kNaturalPolicyGradient;
  } else {
    throw ValidationError("unknown solver \"" + cfg.solver + "\"");
  }
  return opts;
}

// Exact suboptimality of pi for this reward on the true instance.
double exact_gap(const TabularMdp& truth, const RewardTable& reward,
                 const StochasticPolicy& pi) {
  double best = value_iteration(truth, reward).values.initial_value(truth);
  double got = policy_evaluation(truth, reward, pi).initial_value(truth);
  return best - got;
}

// Plans for one reward, on the estimated model unless true-model injection
// is on.
StochasticPolicy plan_for(const ExperimentConfig& cfg, const TabularMdp& truth,
                          const EmpiricalModel& model,
                          const std::vector<double>& initial,
                          const RewardTable& reward, const PlanOptions& opts) {
  if (cfg.inject_true_model) {
    if (opts.solver == PlanSolver::kValueIteration) {
      return value_iteration(truth, reward).policy;
    }
    NpgConfig npg_cfg = opts.npg;
    if (npg_cfg.iterations <= 0) {
      npg_cfg.iterations = npg_default_iterations(
          truth.horizon(), truth.num_actions(), opts.epsilon);
    }
    if (npg_cfg.eta <= 0.0) {
      npg_cfg.eta = npg_default_eta(truth.horizon(), truth.num_actions(),
                                    npg_cfg.iterations);
    }
    return npg(truth, reward, npg_cfg).policy;
  }
  return plan_on_model(model, initial, reward, opts);
}

TrialResult run_trial(const ExperimentConfig& cfg, int trial) {
  auto start = std::chrono::steady_clock::now();
  TrialResult result;
  result.trial = trial;

  TabularMdp truth = resolve_instance(cfg, trial);
  const int S = truth.num_states(), A = truth.num_actions(), H = truth.horizon();
  const int n0 = cfg.n0 > 0 ? cfg.n0 : kDefaultN0;
  const std::int64_t n = cfg.n > 0 ? cfg.n : kDefaultN;

  SampleOnlyEnv env(truth);
  RegretLearnerConfig lc = learner_config(cfg, truth);
  Rng explore_rng = Rng(cfg.seed).split(kExplorePhase).split(
      static_cast<std::uint64_t>(trial));
  ExploreResult explored = rf_explore(env, n0, n, lc, explore_rng);
  result.episodes = static_cast<std::int64_t>(S) * H * n0 + n;

  double delta = cfg.epsilon / (2.0 * S * H * H);
  MixtureDistribution mu = mixture_occupancy(truth, explored.cover);
  result.coverage = coverage_ratio(truth, mu, delta).ratio;

  EmpiricalModel model = estimate_model(explored.dataset, S, A);
  std::vector<double> initial = empirical_initial(explored.dataset, S);
  PlanOptions opts = plan_options(cfg);

  Rng reward_rng = Rng(cfg.seed).split(kRewardPhase).split(
      static_cast<std::uint64_t>(trial));
  int reward_id = 0;
  const StochasticPolicy* prev = nullptr;
  std::vector<StochasticPolicy> planned;
  planned.reserve(static_cast<std::size_t>(cfg.rewards.random_count) +
                  cfg.rewards.adversarial_count);
  for (int j = 0; j < cfg.rewards.random_count; ++j) {
    Rng stream = reward_rng.split(static_cast<std::uint64_t>(reward_id));
    RewardTable reward = random_reward(S, A, H, stream);
    planned.push_back(plan_for(cfg, truth, model, initial, reward, opts));
    prev = &planned.back();
    result.rewards.push_back({reward_id, exact_gap(truth, reward, planned.back())});
    ++reward_id;
  }
  for (int j = 0; j < cfg.rewards.adversarial_count; ++j) {
    Rng stream = reward_rng.split(static_cast<std::uint64_t>(reward_id));
    // Pick the candidate on which the previously planned policy does
    // worst; gaps are computed exactly, so this is a deterministic
    // adversary given the stream.
    int pool = std::max(1, cfg.rewards.candidate_pool);
    RewardTable chosen = random_reward(S, A, H, stream);
    if (prev != nullptr) {
      double worst = exact_gap(truth, chosen, *prev);
      for (int c = 1; c < pool; ++c) {
        RewardTable candidate = random_reward(S, A, H, stream);
        double gap = exact_gap(truth, candidate, *prev);
        if (gap > worst) {
          worst = gap;
          chosen = std::move(candidate);
        }
      }
    }
    planned.push_back(plan_for(cfg, truth, model, initial, chosen, opts));
    prev = &planned.back();
    result.rewards.push_back({reward_id, exact_gap(truth, chosen, planned.back())});
    ++reward_id;
  }

  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace

RewardTable random_reward(int num_states, int num_actions, int horizon,
                          Rng& rng) {
  std::vector<double> r(
      static_cast<std::size_t>(horizon) * num_states * num_actions);
  for (double& cell : r) cell = rng.uniform01();
  return {num_states, num_actions, horizon, std::move(r)};
}

E2eResult run_e2e(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ValidationError("need at least one trial");
  E2eResult out;
  out.config = cfg;
  out.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, [&](std::int64_t t) {
    out.trials[static_cast<std::size_t>(t)] = run_trial(cfg, static_cast<int>(t));
  });
  return out;
}

std::string E2eResult::csv(bool with_seconds) const {
  std::string out = "trial,reward_id,gap,coverage_ratio,episodes,seconds\n";
  for (const TrialResult& trial : trials) {
    for (const RewardOutcome& reward : trial.rewards) {
      out += std::to_string(trial.trial);
      out += ',';
      out += std::to_string(reward.reward_id);
      out += ',';
      append_double(out, reward.gap);
      out += ',';
      append_double(out, trial.coverage);
      out += ',';
      out += std::to_string(trial.episodes);
      out += ',';
      append_double(out, with_seconds ? trial.seconds : 0.0);
      out += '\n';
    }
  }
  return out;
}

ComparisonResult run_baseline_comparison(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ValidationError("need at least one trial");
  std::vector<std::int64_t> budgets = cfg.budgets;
  if (budgets.empty()) budgets = {500, 1000, 2000, 4000};
  for (std::int64_t b : budgets) {
    if (b < 1) throw ValidationError("budgets must be positive");
  }

  ComparisonResult out;
  out.config = cfg;
  const std::int64_t combos =
      static_cast<std::int64_t>(budgets.size()) * cfg.trials;
  out.rows.resize(static_cast<std::size_t>(combos) * 2);
  parallel_for(combos, [&](std::int64_t i) {
    const std::int64_t budget = budgets[static_cast<std::size_t>(i) / cfg.trials];
    const int trial = static_cast<int>(i % cfg.trials);
    TabularMdp truth = resolve_instance(cfg, trial);
    const int S = truth.num_states(), A = truth.num_actions(),
              H = truth.horizon();
    SampleOnlyEnv env(truth);
    PlanOptions opts = plan_options(cfg);

    // Both methods spend exactly `budget` episodes, then plan for the same
    // rewards.
    std::vector<RewardTable> suite;
    Rng reward_rng = Rng(cfg.seed).split(kRewardPhase).split(
        static_cast<std::uint64_t>(trial));
    for (int j = 0; j < cfg.rewards.random_count; ++j) {
      Rng stream = reward_rng.split(static_cast<std::uint64_t>(j));
      suite.push_back(random_reward(S, A, H, stream));
    }
    if (suite.empty()) {
      throw ValidationError("comparison needs random_count >= 1");
    }

    Rng base_rng = Rng(cfg.seed).split(kBaselinePhase).split(
        static_cast<std::uint64_t>(i));

    // Reward-free split: half the budget trains the learner across goals,
    // the rest samples from the mixture.
    int n0 = static_cast<int>(
        std::max<std::int64_t>(1, budget / (2 * static_cast<std::int64_t>(S) * H)));
    std::int64_t n = std::max<std::int64_t>(1, budget - static_cast<std::int64_t>(S) * H * n0);
    RegretLearnerConfig lc = learner_config(cfg, truth);
    Rng explore_rng = base_rng.split(0);
    ExploreResult explored = rf_explore(env, n0, n, lc, explore_rng);
    EmpiricalModel model = estimate_model(explored.dataset, S, A);
    std::vector<double> initial = empirical_initial(explored.dataset, S);
    ComparisonRow rf_row{"reward_free", budget, trial, 0.0, 0.0};
    for (const RewardTable& reward : suite) {
      StochasticPolicy pi = plan_on_model(model, initial, reward, opts);
      double gap = exact_gap(truth, reward, pi);
      rf_row.mean_gap += gap;
      rf_row.max_gap = std::max(rf_row.max_gap, gap);
    }
    rf_row.mean_gap /= static_cast<double>(suite.size());

    Rng rmax_rng = base_rng.split(1);
    std::vector<RmaxSnapshot> snapshots =
        zero_rmax_explore(env, static_cast<int>(budget), cfg.rmax_m, rmax_rng);
    ComparisonRow rmax_row{"zero_rmax", budget, trial, 0.0, 0.0};
    Rng pick_rng = base_rng.split(2);
    for (const RewardTable& reward : suite) {
      StochasticPolicy pi = zero_rmax_plan(snapshots, reward,
                                           SnapshotRule::kUniformRandom, pick_rng);
      double gap = exact_gap(truth, reward, pi);
      rmax_row.mean_gap += gap;
      rmax_row.max_gap = std::max(rmax_row.max_gap, gap);
    }
    rmax_row.mean_gap /= static_cast<double>(suite.size());

    out.rows[static_cast<std::size_t>(i) * 2] = std::move(rf_row);
    out.rows[static_cast<std::size_t>(i) * 2 + 1] = std::move(rmax_row);
  });
  return out;
}

std::string ComparisonResult::csv() const {
  std::string out = "method,budget,trial,mean_gap,max_gap\n";
  for (const ComparisonRow& row : rows) {
    out += row.method;
    out += ',';
    out += std::to_string(row.budget);
    out += ',';
    out += std::to_string(row.trial);
    out += ',';
    append_double(out, row.mean_gap);
    out += ',';
    append_double(out, row.max_gap);
    out += '\n';
  }
  return out;
}

TheoreticalBudgets theoretical_budgets(int num_states, int num_actions,
                                       int horizon, double eps, double p) {
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    throw ValidationError("dimensions must be positive");
  }
  if (!(eps > 0.0) || !(p > 0.0) || p >= 1.0) {
    throw ValidationError("need eps > 0 and p in (0, 1)");
  }
  const double S = num_states, A = num_actions, H = horizon;
  TheoreticalBudgets b;
  b.delta = eps / (2.0 * S * H * H);
  b.iota = std::log(S * A * H / (p * eps));
  b.iota0 = std::log(S * A * H / (p * b.delta));
  b.n_episodes = std::pow(H, 5) * S * S * A * b.iota / (eps * eps);
  b.n0_coverage = S * S * A * std::pow(H, 4) * std::pow(b.iota0, 3) / b.delta;
  b.n0_planning = std::pow(S, 3) * A * std::pow(H, 6) * std::pow(b.iota, 3) / eps;
  b.npg_iterations = npg_default_iterations(horizon, num_actions, eps);
  b.npg_eta = npg_default_eta(horizon, num_actions, b.npg_iterations);
  return b;
}

namespace {

ojson config_to_json(const ExperimentConfig& cfg) {
  ojson j;
  j["instance"] = {{"family", cfg.instance.family},
                   {"S", cfg.instance.num_states},
                   {"A", cfg.instance.num_actions},
                   {"H", cfg.instance.horizon},
                   {"concentration", cfg.instance.concentration},
                   {"path", cfg.instance.path}};
  j["epsilon"] = cfg.epsilon;
  j["failure_prob"] = cfg.failure_prob;
  j["n0"] = cfg.n0;
  j["n"] = cfg.n;
  j["learner"] = cfg.learner;
  j["bonus_scale"] = cfg.bonus_scale;
  j["solver"] = cfg.solver;
  j["inject_true_model"] = cfg.inject_true_model;
  j["rewards"] = {{"random_count", cfg.rewards.random_count},
                  {"adversarial_count", cfg.rewards.adversarial_count},
                  {"candidate_pool", cfg.rewards.candidate_pool}};
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["budgets"] = cfg.budgets;
  j["rmax_m"] = cfg.rmax_m;
  j["outdir"] = cfg.outdir;
  return j;
}

ExperimentConfig config_from_json(const ojson& j, const std::string& path) {
  ExperimentConfig cfg;
  try {
    if (j.contains("instance")) {
      const auto& inst = j["instance"];
      cfg.instance.family = inst.value("family", cfg.instance.family);
      cfg.instance.num_states = inst.value("S", cfg.instance.num_states);
      cfg.instance.num_actions = inst.value("A", cfg.instance.num_actions);
      cfg.instance.horizon = inst.value("H", cfg.instance.horizon);
      cfg.instance.concentration =
          inst.value("concentration", cfg.instance.concentration);
      cfg.instance.path = inst.value("path", cfg.instance.path);
    }
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.failure_prob = j.value("failure_prob", cfg.failure_prob);
    cfg.n0 = j.value("n0", cfg.n0);
    cfg.n = j.value("n", cfg.n);
    cfg.learner = j.value("learner", cfg.learner);
    cfg.bonus_scale = j.value("bonus_scale", cfg.bonus_scale);
    cfg.solver = j.value("solver", cfg.solver);
    cfg.inject_true_model = j.value("inject_true_model", cfg.inject_true_model);
    if (j.contains("rewards")) {
      const auto& rw = j["rewards"];
      cfg.rewards.random_count =
          rw.value("random_count", cfg.rewards.random_count);
      cfg.rewards.adversarial_count =
          rw.value("adversarial_count", cfg.rewards.adversarial_count);
      cfg.rewards.candidate_pool =
          rw.value("candidate_pool", cfg.rewards.candidate_pool);
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("budgets")) {
      cfg.budgets.clear();
      for (const auto& v : j["budgets"]) {
        cfg.budgets.push_back(v.get<std::int64_t>());
      }
    }
    cfg.rmax_m = j.value("rmax_m", cfg.rmax_m);
    cfg.outdir = j.value("outdir", cfg.outdir);
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig read_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const std::exception& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
  return config_from_json(j, path);
}

void write_experiment_config(const ExperimentConfig& cfg,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << config_to_json(cfg).dump(2) << '\n';
  if (!out) throw IoError("write to " + path + " failed");
}

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path + " failed");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

}  // namespace

void write_e2e_results(const E2eResult& result, const std::string& dir) {
  ensure_dir(dir);
  write_text(result.csv(), dir + "/results.csv");
  write_experiment_config(result.config, dir + "/config.json");
}

void write_comparison_results(const ComparisonResult& result,
                              const std::string& dir) {
  ensure_dir(dir);
  write_text(result.csv(), dir + "/comparison.csv");
  write_experiment_config(result.config, dir + "/config.json");
}

}  // namespace rfx
