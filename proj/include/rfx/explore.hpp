#ifndef RFX_EXPLORE_HPP
#define RFX_EXPLORE_HPP

#include <cstdint>
#include <vector>

#include "rfx/dp.hpp"
#include "rfx/mdp.hpp"
#include "rfx/rng.hpp"

namespace rfx {

// Configuration for the episodic regret learner used during exploration.
// The learner only ever touches the environment through episode sampling.
//
//  - kBernstein: optimistic value iteration on empirical estimates with a
//    variance-adaptive exploration bonus
//        scale * (sqrt(varhat * iota / N) + horizon * iota / N)
//    where iota = log(S*A*H*episodes / failure_prob), clipped to [0, H].
//  - kHoeffding: the simpler range-based bonus scale * H * sqrt(iota / N).
//  - kOracleOptimal: a test stub that ignores the samples and plays the
//    exact optimal policy for the given reward every episode.  Requires
//    oracle_mdp; only for tests and diagnostics, since it reads the kernel.
struct RegretLearnerConfig {
  enum class Kind { kBernstein, kHoeffding, kOracleOptimal };
  Kind kind = Kind::kBernstein;
  double bonus_scale = 1.0;
  double failure_prob = 0.01;
  const TabularMdp* oracle_mdp = nullptr;
};

// Runs the learner for `episodes` episodes against env under the given
// reward and returns the policy played in each episode, in play order.
// Every policy returned is deterministic (greedy with lowest-index ties).
std::vector<StochasticPolicy> run_regret_learner(const SampleOnlyEnv& env,
                                                 const RewardTable& reward,
                                                 int episodes,
                                                 const RegretLearnerConfig& cfg,
                                                 Rng& rng);

// The exploration output: one block of n0 policies per goal (s, h), each
// with its action distribution at the goal replaced by uniform.  Goals are
// ordered step-major (g = h * S + s) and blocks are concatenated in goal
// order, so the layout is deterministic.
struct PolicyCover {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<StochasticPolicy> policies;
  std::vector<int> per_goal;  // H*S entries, policies contributed per goal

  int goal_count(int h, int s) const {
    return per_goal[static_cast<std::size_t>(h) * num_states + s];
  }
};

// Reward-free exploration.  Phase one: for every goal (s, h), train the
// regret learner on the indicator reward of that goal and keep all n0
// played policies, each uniformized at the goal so every action there
// retains 1/A of the reach probability.  Phase two: collect n episodes,
// each from a policy drawn uniformly from the cover.  Rewards are never
// consulted; the environment is only sampled.
struct ExploreResult {
  PolicyCover cover;
  EpisodeDataset dataset;
};
ExploreResult rf_explore(const SampleOnlyEnv& env, int n0, std::int64_t n,
                         const RegretLearnerConfig& cfg, Rng& rng);

// State-action distribution induced by first drawing a cover policy
// uniformly and then running it: the average of the policies' occupancy
// tensors.  Layers sum to 1 like any single occupancy.
struct MixtureDistribution {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> mu;  // H*S*A

  double prob(int h, int s, int a) const {
    return mu[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
};
MixtureDistribution mixture_occupancy(const TabularMdp& mdp,
                                      const PolicyCover& cover);

// Worst ratio (best-case reach of s at h) / mu(s, a, h) over all
// delta-significant pairs (s, h) and all actions, together with the
// attaining witness.  The numerator is what a policy tuned to hit (s, h)
// and then play a can achieve; the ratio therefore bounds how under-sampled
// the mixture leaves any plannable state-action.  Infinite when the mixture
// misses a significant pair entirely; 0 with witness (-1,-1,-1) when no
// pair is significant at delta.
struct CoverageResult {
  double ratio = 0.0;
  int h = -1;
  int s = -1;
  int a = -1;
};
CoverageResult coverage_ratio(const TabularMdp& mdp,
                              const MixtureDistribution& mu, double delta);

}  // namespace rfx

#endif  // RFX_EXPLORE_HPP
