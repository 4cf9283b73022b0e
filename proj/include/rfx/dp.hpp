#ifndef RFX_DP_HPP
#define RFX_DP_HPP

#include <cstdint>
#include <vector>

#include "rfx/mdp.hpp"

namespace rfx {

// Exact value tables from a backward pass.  v is (H+1) x S with the
// terminal layer identically zero; q is H x S x A.  All indices 0-based.
struct ValueTables {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> v;  // (H+1)*S
  std::vector<double> q;  // H*S*A

  double value(int h, int s) const {
    return v[static_cast<std::size_t>(h) * num_states + s];
  }
  double qvalue(int h, int s, int a) const {
    return q[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
  // Expected return from the initial distribution.
  double initial_value(const TabularMdp& mdp) const;
};

// State-action visitation probabilities of a policy.  probs[h][s][a] is the
// probability of being in s at step h and playing a; marginals[h][s] sums
// over actions.  Each step layer sums to 1.
struct OccupancyMeasure {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> probs;      // H*S*A
  std::vector<double> marginals;  // H*S

  double prob(int h, int s, int a) const {
    return probs[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
  double marginal(int h, int s) const {
    return marginals[static_cast<std::size_t>(h) * num_states + s];
  }
};

// Result of value_iteration / brute_force_optimal: the optimal value tables
// (or best found value) together with an achieving policy.
struct SolvedPolicy {
  ValueTables values;
  StochasticPolicy policy;
};

// Per-(state, step) best-case reach probabilities and the induced
// delta-significance labels: a pair (s, h) is significant when some policy
// occupies s at step h with probability at least delta.
struct SignificanceReport {
  int num_states = 0;
  int horizon = 0;
  double delta = 0.0;
  std::vector<double> reach;     // H*S, max over policies of P(s_h = s)
  std::vector<char> significant; // H*S

  double reach_at(int h, int s) const {
    return reach[static_cast<std::size_t>(h) * num_states + s];
  }
  bool is_significant(int h, int s) const {
    return significant[static_cast<std::size_t>(h) * num_states + s] != 0;
  }
};

// Exact policy evaluation by backward induction:
//   q_h(s,a) = r_h(s,a) + sum_{s'} P_h(s'|s,a) v_{h+1}(s'),
//   v_h(s)   = sum_a pi_h(a|s) q_h(s,a),  v_{H+1} = 0.
ValueTables policy_evaluation(const TabularMdp& mdp, const RewardTable& reward,
                              const StochasticPolicy& pi);

// Optimal values via the same recursion with a max over actions.  The
// returned policy is the greedy one, breaking ties toward the lowest action
// index, so the output is deterministic for a given input.
SolvedPolicy value_iteration(const TabularMdp& mdp, const RewardTable& reward);

// Forward visitation recursion for a policy:
//   d_1 = p1,  d_{h+1}(s') = sum_{s,a} d_h(s) pi_h(a|s) P_h(s'|s,a).
OccupancyMeasure occupancy(const TabularMdp& mdp, const StochasticPolicy& pi);

// Best-case probability of occupying goal_state at step goal_h (0-based),
// max over all policies, computed by value iteration on the indicator
// reward for that goal.  Also returns an achieving policy.
struct ReachResult {
  double probability = 0.0;
  StochasticPolicy policy;
};
ReachResult max_reach(const TabularMdp& mdp, int goal_state, int goal_h);

// Runs max_reach for every (state, step) pair and labels significance at
// threshold delta.  delta must be in (0, 1].
SignificanceReport significance(const TabularMdp& mdp, double delta);

// Exhaustive search over all A^(S*H) deterministic nonstationary policies.
// Used as an independent ground-truth oracle for value_iteration on small
// instances.  Throws ValidationError when the enumeration would exceed
// max_policies.  Ties are broken toward the lexicographically smallest
// action table (h-major, then state), so the result does not depend on
// evaluation order or thread count.
SolvedPolicy brute_force_optimal(const TabularMdp& mdp,
                                 const RewardTable& reward,
                                 std::uint64_t max_policies = 1000000);

// The simulation difference identity for two MDPs that differ only in their
// transition kernels: with v' the value tables of pi on mdp1 and d'' the
// occupancy of pi on mdp2,
//   sum_h sum_{s,a} d''_h(s,a) * sum_{s'} (P1 - P2)(s'|s,a) v'_{h+1}(s')
// equals the gap between the two initial values taken under mdp2's initial
// distribution.  Dimensions and rewards must match; initial distributions
// are taken from mdp2.
double value_difference(const TabularMdp& mdp1, const TabularMdp& mdp2,
                        const RewardTable& reward, const StochasticPolicy& pi);

// Plain single-threaded reference implementations of the kernels above.
// Kept deliberately naive and separate from the parallel code paths so the
// two can be checked against each other; see the benchmark target for the
// performance comparison.
namespace serial {
ValueTables policy_evaluation(const TabularMdp& mdp, const RewardTable& reward,
                              const StochasticPolicy& pi);
SolvedPolicy value_iteration(const TabularMdp& mdp, const RewardTable& reward);
OccupancyMeasure occupancy(const TabularMdp& mdp, const StochasticPolicy& pi);
SignificanceReport significance(const TabularMdp& mdp, double delta);
}  // namespace serial

}  // namespace rfx

#endif  // RFX_DP_HPP
