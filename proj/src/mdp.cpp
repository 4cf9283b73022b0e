#include "rfx/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rfx/errors.hpp"

namespace rfx {

namespace {

void check_dims(int S, int A, int H) {
  if (S < 1 || A < 1 || H < 1) {
    throw ValidationError("dimensions must satisfy S >= 1, A >= 1, H >= 1");
  }
}

}  // namespace

TabularMdp::TabularMdp(int num_states, int num_actions, int horizon,
                       std::vector<double> transitions,
                       std::vector<double> initial)
    : S_(num_states), A_(num_actions), H_(horizon),
      P_(std::move(transitions)), p1_(std::move(initial)) {
  check_dims(S_, A_, H_);
  std::size_t want =
      static_cast<std::size_t>(H_) * S_ * A_ * S_;
  if (P_.size() != want) {
    throw ValidationError("transition tensor has " + std::to_string(P_.size()) +
                          " entries, expected H*S*A*S = " + std::to_string(want));
  }
  if (p1_.size() != static_cast<std::size_t>(S_)) {
    throw ValidationError("initial distribution has " +
                          std::to_string(p1_.size()) + " entries, expected S = " +
                          std::to_string(S_));
  }
}

std::string MdpViolation::describe() const {
  char buf[160];
  switch (kind) {
    case Kind::kNegativeTransition:
      std::snprintf(buf, sizeof buf,
                    "negative transition probability %.17g at h=%d s=%d a=%d s'=%d",
                    value, h, s, a, s2);
      break;
    case Kind::kRowSumOffByTolerance:
      std::snprintf(buf, sizeof buf,
                    "transition row at h=%d s=%d a=%d sums to %.17g, expected 1",
                    h, s, a, value);
      break;
    case Kind::kNegativeInitial:
      std::snprintf(buf, sizeof buf,
                    "negative initial probability %.17g at s=%d", value, s);
      break;
    case Kind::kInitialSumOffByTolerance:
      std::snprintf(buf, sizeof buf,
                    "initial distribution sums to %.17g, expected 1", value);
      break;
  }
  return buf;
}

std::vector<MdpViolation> validate_mdp(const TabularMdp& mdp, double tol) {
  std::vector<MdpViolation> out;
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        double sum = 0.0;
        for (int s2 = 0; s2 < S; ++s2) {
          double p = mdp.transition(h, s, a, s2);
          if (p < 0.0) {
            out.push_back({MdpViolation::Kind::kNegativeTransition, h, s, a, s2, p});
          }
          sum += p;
        }
        if (std::fabs(sum - 1.0) > tol) {
          out.push_back({MdpViolation::Kind::kRowSumOffByTolerance, h, s, a, -1, sum});
        }
      }
    }
  }
  double isum = 0.0;
  for (int s = 0; s < S; ++s) {
    double p = mdp.initial(s);
    if (p < 0.0) {
      out.push_back({MdpViolation::Kind::kNegativeInitial, -1, s, -1, -1, p});
    }
    isum += p;
  }
  if (std::fabs(isum - 1.0) > tol) {
    out.push_back({MdpViolation::Kind::kInitialSumOffByTolerance, -1, -1, -1, -1, isum});
  }
  return out;
}

StochasticPolicy::StochasticPolicy(int num_states, int num_actions, int horizon,
                                   std::vector<double> probs)
    : S_(num_states), A_(num_actions), H_(horizon), pi_(std::move(probs)) {
  check_dims(S_, A_, H_);
  std::size_t want = static_cast<std::size_t>(H_) * S_ * A_;
  if (pi_.size() != want) {
    throw ValidationError("policy tensor has " + std::to_string(pi_.size()) +
                          " entries, expected H*S*A = " + std::to_string(want));
  }
}

StochasticPolicy StochasticPolicy::uniform(int num_states, int num_actions,
                                           int horizon) {
  check_dims(num_states, num_actions, horizon);
  std::vector<double> probs(
      static_cast<std::size_t>(horizon) * num_states * num_actions,
      1.0 / num_actions);
  return {num_states, num_actions, horizon, std::move(probs)};
}

StochasticPolicy StochasticPolicy::deterministic(int num_states, int num_actions,
                                                 int horizon,
                                                 std::span<const int> actions) {
  check_dims(num_states, num_actions, horizon);
  std::size_t rows = static_cast<std::size_t>(horizon) * num_states;
  if (actions.size() != rows) {
    throw ValidationError("deterministic policy needs H*S actions, got " +
                          std::to_string(actions.size()));
  }
  std::vector<double> probs(rows * num_actions, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    int a = actions[i];
    if (a < 0 || a >= num_actions) {
      throw ValidationError("action index " + std::to_string(a) +
                            " out of range");
    }
    probs[i * num_actions + a] = 1.0;
  }
  return {num_states, num_actions, horizon, std::move(probs)};
}

void StochasticPolicy::set_action_row(int h, int s, std::span<const double> row) {
  if (row.size() != static_cast<std::size_t>(A_)) {
    throw ValidationError("action row must have A entries");
  }
  std::copy(row.begin(), row.end(), pi_.begin() + offset(h, s));
}

std::vector<std::pair<int, int>> StochasticPolicy::validate(double tol) const {
  std::vector<std::pair<int, int>> bad;
  for (int h = 0; h < H_; ++h) {
    for (int s = 0; s < S_; ++s) {
      double sum = 0.0;
      bool neg = false;
      for (int a = 0; a < A_; ++a) {
        double p = prob(h, s, a);
        if (p < 0.0) neg = true;
        sum += p;
      }
      if (neg || std::fabs(sum - 1.0) > tol) bad.emplace_back(h, s);
    }
  }
  return bad;
}

RewardTable::RewardTable(int num_states, int num_actions, int horizon,
                         std::vector<double> rewards)
    : S_(num_states), A_(num_actions), H_(horizon), r_(std::move(rewards)) {
  check_dims(S_, A_, H_);
  std::size_t want = static_cast<std::size_t>(H_) * S_ * A_;
  if (r_.size() != want) {
    throw ValidationError("reward tensor has " + std::to_string(r_.size()) +
                          " entries, expected H*S*A = " + std::to_string(want));
  }
}

RewardTable RewardTable::zeros(int num_states, int num_actions, int horizon) {
  check_dims(num_states, num_actions, horizon);
  return {num_states, num_actions, horizon,
          std::vector<double>(
              static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0)};
}

RewardTable RewardTable::indicator(int num_states, int num_actions, int horizon,
                                   int goal_state, int goal_h) {
  if (goal_state < 0 || goal_state >= num_states || goal_h < 0 ||
      goal_h >= horizon) {
    throw ValidationError("indicator goal out of range");
  }
  RewardTable table = zeros(num_states, num_actions, horizon);
  for (int a = 0; a < num_actions; ++a) table.reward(goal_h, goal_state, a) = 1.0;
  return table;
}

std::vector<std::tuple<int, int, int>> RewardTable::validate(double tol) const {
  std::vector<std::tuple<int, int, int>> bad;
  for (int h = 0; h < H_; ++h) {
    for (int s = 0; s < S_; ++s) {
      for (int a = 0; a < A_; ++a) {
        double r = reward(h, s, a);
        if (r < -tol || r > 1.0 + tol) bad.emplace_back(h, s, a);
      }
    }
  }
  return bad;
}

Trajectory sample_episode(const TabularMdp& mdp, const StochasticPolicy& pi,
                          Rng& rng) {
  if (pi.num_states() != mdp.num_states() ||
      pi.num_actions() != mdp.num_actions() ||
      pi.horizon() != mdp.horizon()) {
    throw ValidationError("policy dimensions do not match the MDP");
  }
  const int H = mdp.horizon();
  Trajectory traj;
  traj.states.resize(H + 1);
  traj.actions.resize(H);
  int s = rng.categorical(mdp.initial_dist());
  traj.states[0] = s;
  for (int h = 0; h < H; ++h) {
    int a = rng.categorical(pi.action_row(h, s));
    traj.actions[h] = a;
    s = rng.categorical(mdp.transition_row(h, s, a));
    traj.states[h + 1] = s;
  }
  return traj;
}

double trajectory_return(const Trajectory& traj, const RewardTable& reward) {
  double total = 0.0;
  for (int h = 0; h < reward.horizon(); ++h) {
    total += reward.reward(h, traj.states[h], traj.actions[h]);
  }
  return total;
}

}  // namespace rfx
