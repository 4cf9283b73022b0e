#ifndef RFX_INSTANCES_HPP
#define RFX_INSTANCES_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rfx/mdp.hpp"
#include "rfx/rng.hpp"

namespace rfx {

// Five-state, two-action, horizon-2 MDP illustrating significance: from the
// start state, action 0 reaches state 1 surely while action 1 reaches state
// 2 with probability 1e-6 and state 3 otherwise; states 1..4 absorb.  State
// 2 is reachable only with tiny probability and state 4 not at all, so they
// drop out of coverage requirements once the threshold exceeds their best
// reach.
TabularMdp toy_significance_mdp();

// Random MDP with every transition row and the initial distribution drawn
// from a symmetric Dirichlet with the given concentration.  Small
// concentrations give sparse, spiky kernels; large ones concentrate near
// uniform rows.
TabularMdp random_mdp(int num_states, int num_actions, int horizon,
                      double concentration, Rng& rng);

// Family of balanced +-1 vectors indexed by (action, slot): per_action
// vectors of length 2n for each of num_actions actions, all pairwise inner
// products below 2*n*gamma in absolute value (across distinct (a, j) pairs).
struct PackingVectors {
  int n = 0;
  int num_actions = 0;
  int per_action = 0;  // vectors per action
  double gamma = 0.0;
  std::vector<std::int8_t> v;  // [A][per_action][2n], entries -1 or +1

  std::span<const std::int8_t> vec(int a, int j) const {
    std::size_t len = 2 * static_cast<std::size_t>(n);
    return {v.data() + (static_cast<std::size_t>(a) * per_action + j) * len, len};
  }
};

// Sufficient condition for a draw of A*M balanced vectors to be
// gamma-uncorrelated with constant probability: 2 log M <= n gamma^2 -
// log(4n) - 2 log A.  Informative only; the sampler below retries and is
// allowed to succeed outside this regime.
bool packing_condition_holds(int n, int num_actions, int per_action,
                             double gamma);

// Rejection-samples the family: each attempt draws every vector as a random
// shuffle of n plus-ones and n minus-ones, then checks all pairwise inner
// products; any failure rejects the whole draw.  Throws ValidationError
// after max_retries failed attempts (the usual cause is a per_action count
// too aggressive for n and gamma).
PackingVectors sample_uncorrelated_packing(int n, int num_actions,
                                           int per_action, double gamma,
                                           Rng& rng, int max_retries = 1000);

// Leaf reward vector nu = v1/3 + v2/6 + 1/2 componentwise; entries land in
// [0, 1] because v1, v2 are +-1 vectors.  The x field is left empty; the
// embedded-tree wrapper fills it in.
struct HardRewardSpec {
  std::optional<int> x;    // hard-layer cell the reward targets (1-based)
  std::vector<double> nu;  // 2n leaf rewards
};
HardRewardSpec packing_reward_vector(std::span<const std::int8_t> v1,
                                     std::span<const std::int8_t> v2);

// Horizon-2 hard instance: one start state, 2n absorbing leaves, and action
// kernels q(.|a) that all stay within eps/(2n) of uniform per cell, so every
// action looks alike unless the kernels are estimated to high accuracy.
//
// The random variant uses q(.|a) = 1/(2n) + (eps/(2n)) * v_a with v_a a
// random balanced +-1 vector; the explicit variant validates the supplied
// q (num_actions rows of length 2n: nonnegative, summing to 1, within
// eps/(2n) of uniform cellwise) and throws ValidationError on violation.
// State 0 is the start; leaf i (1-based) is state i.
TabularMdp single_state_hard_instance(int n, int num_actions, double eps,
                                      Rng& rng);
TabularMdp single_state_hard_instance(int n, int num_actions, double eps,
                                      std::span<const double> q);

// Kernel rows for the explicit variant built from a packing: row a is
// 1/(2n) + (eps/(2n)) * v_{a, choice[a]}.  Returned flat, A x 2n.
std::vector<double> hard_kernel_rows(const PackingVectors& packing,
                                     std::span<const int> choice, double eps);

// Reward table for the horizon-2 instance: zero at the start state, nu[i-1]
// at leaf i for every step and action.  The value of playing action a is
// then exactly <q(.|a), nu>.
RewardTable single_state_reward(int n, int num_actions,
                                std::span<const double> nu);

// Binary tree of depth log2(n) whose 2^depth bottom cells each carry an
// independent horizon-2 hard kernel over 2n shared absorbing leaves.
// Navigation is deterministic: at layer ell, action 0 keeps x, every other
// action moves to x + 2^ell; cell (x, ell) is occupied exactly at 0-based
// step ell, and the hard layer (ell = depth) at step depth.  Total 4n - 1
// states plus optional isolated padding.
struct EmbeddedTreeInstance {
  TabularMdp mdp;
  int n = 0;
  int depth = 0;  // log2(n)
  int num_padding = 0;

  // Flat index of tree cell (x, ell), x in [1, 2^ell], ell in [0, depth].
  int state_of(int x, int ell) const;
  // Flat index of leaf i, i in [1, 2n].
  int leaf_state(int i) const;
  // 0-based step at which the hard layer is occupied.
  int hard_step() const { return depth; }
  int tree_states() const { return 4 * n - 1; }
};

// Random variant draws each bottom-cell kernel like the horizon-2 family at
// accuracy eps0; the explicit variant takes q flat as [n][A][2n] and
// validates it the same way.  Requires n a power of two, num_actions >= 2,
// horizon >= 2 * (log2(n) + 1) and eps0 <= 1 / (8 * horizon).  pad_states
// appends that many unreachable self-loop states.
EmbeddedTreeInstance embedded_tree_instance(int n, int num_actions, int horizon,
                                            double eps0, Rng& rng,
                                            int pad_states = 0);
EmbeddedTreeInstance embedded_tree_instance(int n, int num_actions, int horizon,
                                            double eps0,
                                            std::span<const double> q,
                                            int pad_states = 0);

// Reward for the tree: 1 at hard cell (x, depth) and nu[i-1] at leaf i, both
// for every step and action, zero elsewhere.  An optimal policy must steer
// to cell x and then discriminate the leaf kernels.
RewardTable embedded_reward(const EmbeddedTreeInstance& instance, int x,
                            std::span<const double> nu);

}  // namespace rfx

#endif  // RFX_INSTANCES_HPP
