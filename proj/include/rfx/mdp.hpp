#ifndef RFX_MDP_HPP
#define RFX_MDP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rfx/rng.hpp"

namespace rfx {

// Finite-horizon tabular MDP with S states, A actions and horizon H.
// An episode visits states s_1, ..., s_{H+1}: s_1 is drawn from the initial
// distribution, and taking action a in state s at step h (1-based in the
// documentation, 0-based in code) moves to s' with probability
// transition(h, s, a, s').  Step kernels are allowed to differ across h.
//
// The tensors are stored dense and row-major.  Construction checks shapes
// only; probabilistic validity (simplex rows, nonnegativity) is reported by
// validate_mdp and never silently repaired, so that deliberately broken
// inputs can be surfaced to callers with exact indices.
class TabularMdp {
 public:
  // transitions has H*S*A*S entries laid out [h][s][a][s'];
  // initial has S entries.
  TabularMdp(int num_states, int num_actions, int horizon,
             std::vector<double> transitions, std::vector<double> initial);

  int num_states() const { return S_; }
  int num_actions() const { return A_; }
  int horizon() const { return H_; }

  double transition(int h, int s, int a, int s2) const {
    return P_[offset(h, s, a) + static_cast<std::size_t>(s2)];
  }
  std::span<const double> transition_row(int h, int s, int a) const {
    return {P_.data() + offset(h, s, a), static_cast<std::size_t>(S_)};
  }
  double initial(int s) const { return p1_[static_cast<std::size_t>(s)]; }
  std::span<const double> initial_dist() const { return p1_; }

  std::span<const double> transitions_flat() const { return P_; }

 private:
  std::size_t offset(int h, int s, int a) const {
    return ((static_cast<std::size_t>(h) * S_ + s) * A_ + a) * S_;
  }

  int S_, A_, H_;
  std::vector<double> P_;
  std::vector<double> p1_;
};

// One probabilistic defect found by validate_mdp, with enough indices to
// locate the offending row or cell.  h/s/a are -1 where not applicable
// (initial-distribution defects have no h or a, row-sum defects no s').
struct MdpViolation {
  enum class Kind {
    kNegativeTransition,
    kRowSumOffByTolerance,
    kNegativeInitial,
    kInitialSumOffByTolerance,
  };
  Kind kind;
  int h = -1;  // 0-based step
  int s = -1;
  int a = -1;
  int s2 = -1;
  double value = 0.0;  // the offending entry or row sum
  std::string describe() const;
};

// Checks every transition row and the initial distribution against the
// simplex constraints (entries >= 0, sums within tol of 1).  Returns all
// violations rather than stopping at the first.
std::vector<MdpViolation> validate_mdp(const TabularMdp& mdp, double tol = 1e-9);

// Policy tensor pi[h][s][a]: the probability of playing a in state s at
// step h.  Non-stationary and stochastic; deterministic policies are point
// masses.  Rows are expected to be simplex rows (validate() reports
// offenders); the samplers assume validity and do not recheck per draw.
class StochasticPolicy {
 public:
  StochasticPolicy(int num_states, int num_actions, int horizon,
                   std::vector<double> probs);

  // Uniform over actions everywhere.
  static StochasticPolicy uniform(int num_states, int num_actions, int horizon);
  // Point mass on actions[h*S + s].
  static StochasticPolicy deterministic(int num_states, int num_actions,
                                        int horizon,
                                        std::span<const int> actions);

  int num_states() const { return S_; }
  int num_actions() const { return A_; }
  int horizon() const { return H_; }

  double prob(int h, int s, int a) const {
    return pi_[offset(h, s) + static_cast<std::size_t>(a)];
  }
  std::span<const double> action_row(int h, int s) const {
    return {pi_.data() + offset(h, s), static_cast<std::size_t>(A_)};
  }
  // Overwrites the action distribution at (h, s); row must have A entries.
  void set_action_row(int h, int s, std::span<const double> row);

  std::span<const double> probs_flat() const { return pi_; }

  // Indices (h, s) of rows that are not action simplexes within tol.
  std::vector<std::pair<int, int>> validate(double tol = 1e-9) const;

 private:
  std::size_t offset(int h, int s) const {
    return (static_cast<std::size_t>(h) * S_ + s) * A_;
  }

  int S_, A_, H_;
  std::vector<double> pi_;
};

// Reward tensor r[h][s][a] with entries in [0, 1].
class RewardTable {
 public:
  RewardTable(int num_states, int num_actions, int horizon,
              std::vector<double> rewards);

  static RewardTable zeros(int num_states, int num_actions, int horizon);
  // 1 at every action of (goal_state, goal_h), 0 elsewhere.  The value of a
  // policy under this table is exactly the probability of occupying
  // goal_state at step goal_h.
  static RewardTable indicator(int num_states, int num_actions, int horizon,
                               int goal_state, int goal_h);

  int num_states() const { return S_; }
  int num_actions() const { return A_; }
  int horizon() const { return H_; }

  double reward(int h, int s, int a) const {
    return r_[(static_cast<std::size_t>(h) * S_ + s) * A_ + a];
  }
  double& reward(int h, int s, int a) {
    return r_[(static_cast<std::size_t>(h) * S_ + s) * A_ + a];
  }
  std::span<const double> rewards_flat() const { return r_; }

  // Indices (h, s, a) of entries outside [0, 1] (beyond tol).
  std::vector<std::tuple<int, int, int>> validate(double tol = 1e-9) const;

 private:
  int S_, A_, H_;
  std::vector<double> r_;
};

// One episode: states has H+1 entries (s_1 through s_{H+1}), actions has H.
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;
};

// A batch of episodes collected under a common horizon.
struct EpisodeDataset {
  int horizon = 0;
  std::vector<Trajectory> episodes;

  std::size_t size() const { return episodes.size(); }
};

// Draws one episode of mdp under pi using rng.  Throws ValidationError on
// dimension mismatch.  With a fixed seed the trajectory is bit-reproducible.
Trajectory sample_episode(const TabularMdp& mdp, const StochasticPolicy& pi,
                          Rng& rng);

// Total reward of a trajectory under a reward table (test and tool helper;
// exact expectations come from the dynamic-programming routines).
double trajectory_return(const Trajectory& traj, const RewardTable& reward);

// The restricted view of an environment handed to exploration algorithms:
// dimensions plus episode sampling, and nothing else.  Keeping the kernel
// inaccessible through this interface guarantees by construction that the
// exploration phase never peeks at the true transition probabilities.
class SampleOnlyEnv {
 public:
  explicit SampleOnlyEnv(const TabularMdp& mdp) : mdp_(&mdp) {}

  int num_states() const { return mdp_->num_states(); }
  int num_actions() const { return mdp_->num_actions(); }
  int horizon() const { return mdp_->horizon(); }

  Trajectory sample(const StochasticPolicy& pi, Rng& rng) const {
    return sample_episode(*mdp_, pi, rng);
  }

 private:
  const TabularMdp* mdp_;
};

}  // namespace rfx

#endif  // RFX_MDP_HPP
