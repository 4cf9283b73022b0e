#ifndef RFX_RMAX_HPP
#define RFX_RMAX_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rfx/mdp.hpp"
#include "rfx/plan.hpp"
#include "rfx/rng.hpp"

namespace rfx {

// States whose every action has at least m samples at that step.  The model
// substituted for the environment treats unknown (s, h) as absorbing.
struct KnownSet {
  int num_states = 0;
  int horizon = 0;
  int m = 0;
  std::vector<char> known;  // H*S

  bool is_known(int h, int s) const {
    return known[static_cast<std::size_t>(h) * num_states + s] != 0;
  }
  int known_count() const;
};

// State of the baseline explorer after a given episode: the empirical model
// and known set with all counts from episodes 1..episode folded in.
struct RmaxSnapshot {
  int episode = 0;  // 1-based
  EmpiricalModel model;
  KnownSet known;
};

// Reward-free baseline exploration.  Each episode solves a surrogate MDP
// that uses the empirical kernel on known states, a self-loop on unknown
// states, and reward 1 on unknown states (0 on known ones), then rolls the
// greedy policy out on the real environment.  Under the surrogate every
// action at an unknown state looks identical, so the executed action at
// unknown states is the least-sampled one (lowest index on ties); anywhere
// known, the greedy action is played as computed.  Counts are cumulative,
// and a snapshot is recorded after every episode.
std::vector<RmaxSnapshot> zero_rmax_explore(const SampleOnlyEnv& env,
                                            int episodes, int m, Rng& rng);

// Planning against the baseline's exploration record: pick a snapshot
// (uniformly at random, or the final one), build the same
// known-kernel/unknown-self-loop model, attach the given reward everywhere,
// and solve exactly.  The random rule matches the analysis of the
// exploration scheme; the last-snapshot rule uses all collected data.
enum class SnapshotRule { kUniformRandom, kLast };
StochasticPolicy zero_rmax_plan(std::span<const RmaxSnapshot> snapshots,
                                const RewardTable& reward, SnapshotRule rule,
                                Rng& rng);

// The surrogate MDP for a snapshot (empirical kernel on known states,
// self-loops elsewhere, uniform initial distribution); exposed for tests
// and for the exploration loop.
TabularMdp rmax_surrogate_mdp(const RmaxSnapshot& snapshot);
// The 0/1 exploration reward of a known set: 1 for every action at unknown
// (s, h), 0 at known ones.
RewardTable rmax_exploration_reward(const KnownSet& known, int num_actions);

}  // namespace rfx

#endif  // RFX_RMAX_HPP
