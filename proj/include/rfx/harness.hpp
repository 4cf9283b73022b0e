#ifndef RFX_HARNESS_HPP
#define RFX_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rfx/explore.hpp"
#include "rfx/mdp.hpp"
#include "rfx/plan.hpp"

namespace rfx {

// Which MDP a trial runs on.  "toy" is the fixed five-state example,
// "random" draws a fresh Dirichlet instance per trial from the trial's
// substream, "file" loads the same MDP from disk for every trial.
struct InstanceSpec {
  std::string family = "random";
  int num_states = 5;
  int num_actions = 2;
  int horizon = 3;
  double concentration = 1.0;
  std::string path;
};

// Reward suite evaluated after exploration: random_count tables with
// uniform [0, 1] entries, then adversarial_count tables, each chosen from a
// fresh pool of candidate_pool random tables to maximize the exact gap of
// the previously planned policy.  The adversarial picks probe whether the
// dataset supports rewards selected against it rather than on average.
struct RewardSuiteSpec {
  int random_count = 20;
  int adversarial_count = 0;
  int candidate_pool = 50;
};

struct ExperimentConfig {
  InstanceSpec instance;
  double epsilon = 0.1;
  double failure_prob = 0.1;
  int n0 = 0;           // per-goal learner episodes; 0 selects the default
  std::int64_t n = 0;   // mixture episodes; 0 selects the default
  std::string learner = "bernstein";  // bernstein | hoeffding | oracle
  double bonus_scale = 1.0;
  std::string solver = "vi";  // vi | npg
  bool inject_true_model = false;  // diagnostic: plan on the true kernel
  RewardSuiteSpec rewards;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> budgets;  // compare: episode budgets per method
  int rmax_m = 1;                     // compare: known-set threshold
  std::string outdir;
};

ExperimentConfig read_experiment_config(const std::string& path);
void write_experiment_config(const ExperimentConfig& cfg,
                             const std::string& path);

// One planned reward and the exact suboptimality of the planned policy on
// the true instance, measured by the dynamic-programming routines (never by
// simulation).
struct RewardOutcome {
  int reward_id = 0;
  double gap = 0.0;
};

struct TrialResult {
  int trial = 0;
  double coverage = 0.0;       // worst significant reach-to-mixture ratio
  std::int64_t episodes = 0;   // environment episodes consumed exploring
  double seconds = 0.0;        // wall time, the only nondeterministic field
  std::vector<RewardOutcome> rewards;
};

// Explore-once-plan-many pipeline: per trial, resolve the instance, run
// reward-free exploration, estimate the model once, then plan for every
// reward in the suite and score each planned policy exactly on the true
// instance.  Trials run concurrently on private substreams; results are
// ordered by trial id regardless of completion order and are bit-identical
// across reruns except for the wall-time field.
struct E2eResult {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  // trial,reward_id,gap,coverage_ratio,episodes,seconds rows.  Passing
  // false zeroes the seconds column, giving a byte-stable document.
  std::string csv(bool with_seconds = true) const;
};
E2eResult run_e2e(const ExperimentConfig& cfg);

// Matched-budget comparison of reward-free exploration against the
// known-set baseline: for each episode budget, both methods explore under
// that budget and plan for the same reward suite; rows carry the mean and
// worst exact gap per (method, budget, trial).
struct ComparisonRow {
  std::string method;
  std::int64_t budget = 0;
  int trial = 0;
  double mean_gap = 0.0;
  double max_gap = 0.0;
};
struct ComparisonResult {
  ExperimentConfig config;
  std::vector<ComparisonRow> rows;
  std::string csv() const;  // method,budget,trial,mean_gap,max_gap
};
ComparisonResult run_baseline_comparison(const ExperimentConfig& cfg);

// Writes results.csv plus a config.json echo into dir (created if absent).
void write_e2e_results(const E2eResult& result, const std::string& dir);
void write_comparison_results(const ComparisonResult& result,
                              const std::string& dir);

// Sample-size formulas with all leading constants set to 1, for orientation
// when choosing budgets:
//   delta        = eps / (2 S H^2)
//   iota         = log(S A H / (p eps)),  iota0 = log(S A H / (p delta))
//   n_episodes   = H^5 S^2 A iota / eps^2        (mixture episodes)
//   n0_coverage  = S^2 A H^4 iota0^3 / delta     (per-goal episodes, coverage)
//   n0_planning  = S^3 A H^6 iota^3 / eps        (per-goal episodes, planning)
// plus the gradient-solver schedule for accuracy eps.
struct TheoreticalBudgets {
  double delta = 0.0;
  double iota = 0.0;
  double iota0 = 0.0;
  double n_episodes = 0.0;
  double n0_coverage = 0.0;
  double n0_planning = 0.0;
  int npg_iterations = 0;
  double npg_eta = 0.0;
};
TheoreticalBudgets theoretical_budgets(int num_states, int num_actions,
                                       int horizon, double eps, double p);

// Uniform [0, 1] reward table from the stream (used for reward suites).
RewardTable random_reward(int num_states, int num_actions, int horizon,
                          Rng& rng);

}  // namespace rfx

#endif  // RFX_HARNESS_HPP
