#ifndef RFX_PLAN_HPP
#define RFX_PLAN_HPP

#include <cstdint>
#include <vector>

#include "rfx/dp.hpp"
#include "rfx/mdp.hpp"

namespace rfx {

// Transition counts and ratio estimates built from a dataset.
// counts3[h][s][a][s'] tallies observed (s, a, s') steps at h, counts2 sums
// over s', and p_hat is the exact ratio counts3 / counts2.  Rows never seen
// in the data are completed as a self-loop point mass on their own state,
// which keeps every row a valid distribution without inventing mass on
// other states.
struct EmpiricalModel {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<std::int64_t> counts3;  // H*S*A*S
  std::vector<std::int64_t> counts2;  // H*S*A
  std::vector<double> p_hat;          // H*S*A*S

  std::int64_t count(int h, int s, int a) const {
    return counts2[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
  std::int64_t count(int h, int s, int a, int s2) const {
    return counts3[((static_cast<std::size_t>(h) * num_states + s) * num_actions + a) *
                       num_states + s2];
  }
  double estimate(int h, int s, int a, int s2) const {
    return p_hat[((static_cast<std::size_t>(h) * num_states + s) * num_actions + a) *
                     num_states + s2];
  }
};

// Tallies a dataset into an EmpiricalModel.  The dataset horizon must be
// positive and every index within range; identical counts always produce
// identical estimates, regardless of episode order.
EmpiricalModel estimate_model(const EpisodeDataset& data, int num_states,
                              int num_actions);

// Wraps the estimates into a planning MDP with the given initial
// distribution (S entries).
TabularMdp empirical_mdp(const EmpiricalModel& model,
                         std::vector<double> initial);

// Frequency of initial states in the dataset; uniform when the dataset is
// empty so the result is always a distribution.
std::vector<double> empirical_initial(const EpisodeDataset& data,
                                      int num_states);

// Softmax policy-gradient solver.  Starting from the uniform policy, each
// iteration evaluates the current policy exactly and reweights every action
// row by exp(eta * q); the row max of q is subtracted before
// exponentiating, which changes nothing after normalization but keeps the
// arithmetic overflow-free.  With eta = sqrt(log A / (H T)) the iterate
// after T rounds is within H sqrt(H log A / T) of optimal, and the exact
// evaluation makes the initial value nondecreasing in t.
struct NpgConfig {
  double eta = 0.0;     // <= 0 selects the default schedule for iterations
  int iterations = 0;
  bool record_trace = false;
};
struct NpgResult {
  StochasticPolicy policy;
  std::vector<double> trace;  // initial values of iterates 0..T if recorded
};
NpgResult npg(const TabularMdp& mdp, const RewardTable& reward,
              const NpgConfig& cfg);

// One reweighting step, exposed for testing: returns the softmax update of
// pi under the q table at learning rate eta.
StochasticPolicy npg_update(const StochasticPolicy& pi,
                            const ValueTables& tables, double eta);

// Schedule that brings the solver within epsilon of optimal:
// T = ceil(4 H^3 log A / epsilon^2) iterations at eta = sqrt(log A / (H T)).
int npg_default_iterations(int horizon, int num_actions, double epsilon);
double npg_default_eta(int horizon, int num_actions, int iterations);

// Planning on an estimated model: builds the empirical MDP and solves it
// for the given reward with the chosen solver.  The reward is consulted
// only here, never during data collection, so one dataset serves any
// number of reward functions.
enum class PlanSolver { kValueIteration, kNaturalPolicyGradient };
struct PlanOptions {
  PlanSolver solver = PlanSolver::kValueIteration;
  double epsilon = 0.1;  // drives the gradient schedule when iterations == 0
  NpgConfig npg;         // optional eta/iteration overrides
};
StochasticPolicy plan(const EpisodeDataset& data, int num_states,
                      int num_actions, const RewardTable& reward,
                      const PlanOptions& opts);
// Same, reusing an already-estimated model (the initial distribution must
// have S entries).
StochasticPolicy plan_on_model(const EmpiricalModel& model,
                               std::vector<double> initial,
                               const RewardTable& reward,
                               const PlanOptions& opts);

}  // namespace rfx

#endif  // RFX_PLAN_HPP
