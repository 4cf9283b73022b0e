#include "rfx/rmax.hpp"

#include <algorithm>

#include "rfx/dp.hpp"
#include "rfx/errors.hpp"

namespace rfx {

namespace {

std::size_t sa_index(int S, int A, int h, int s, int a) {
  return (static_cast<std::size_t>(h) * S + s) * A + a;
}

KnownSet classify(const EmpiricalModel& model, int m) {
  const int S = model.num_states, A = model.num_actions, H = model.horizon;
  KnownSet ks;
  ks.num_states = S;
  ks.horizon = H;
  ks.m = m;
  ks.known.assign(static_cast<std::size_t>(H) * S, 0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      bool all = true;
      for (int a = 0; a < A; ++a) {
        if (model.count(h, s, a) < m) {
          all = false;
          break;
        }
      }
      ks.known[static_cast<std::size_t>(h) * S + s] = all ? 1 : 0;
    }
  }
  return ks;
}

EmpiricalModel fresh_model(int S, int A, int H) {
  EmpiricalModel model;
  model.num_states = S;
  model.num_actions = A;
  model.horizon = H;
  model.counts3.assign(static_cast<std::size_t>(H) * S * A * S, 0);
  model.counts2.assign(static_cast<std::size_t>(H) * S * A, 0);
  model.p_hat.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
  return model;
}

void refresh_p_hat(EmpiricalModel& model) {
  const int S = model.num_states, A = model.num_actions, H = model.horizon;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * S * A; ++i) {
    std::size_t row = static_cast<std::size_t>(i) * S;
    std::int64_t visits = model.counts2[static_cast<std::size_t>(i)];
    if (visits == 0) {
      int s = static_cast<int>((i / A) % S);
      std::fill_n(model.p_hat.begin() + row, S, 0.0);
      model.p_hat[row + s] = 1.0;
      continue;
    }
    double inv = 1.0 / static_cast<double>(visits);
    for (int s2 = 0; s2 < S; ++s2) {
      model.p_hat[row + s2] =
          static_cast<double>(model.counts3[row + s2]) * inv;
    }
  }
}

}  // namespace

int KnownSet::known_count() const {
  int total = 0;
  for (char c : known) total += c != 0;
  return total;
}

TabularMdp rmax_surrogate_mdp(const RmaxSnapshot& snapshot) {
  const EmpiricalModel& model = snapshot.model;
  const int S = model.num_states, A = model.num_actions, H = model.horizon;
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S, 0.0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      bool known = snapshot.known.is_known(h, s);
      for (int a = 0; a < A; ++a) {
        std::size_t row = sa_index(S, A, h, s, a) * static_cast<std::size_t>(S);
        if (known) {
          for (int s2 = 0; s2 < S; ++s2) {
            P[row + s2] = model.estimate(h, s, a, s2);
          }
        } else {
          P[row + s] = 1.0;
        }
      }
    }
  }
  // The initial distribution only matters for reporting initial values; the
  // greedy solution is per-state, so uniform is as good as any.
  std::vector<double> p1(S, 1.0 / S);
  return {S, A, H, std::move(P), std::move(p1)};
}

RewardTable rmax_exploration_reward(const KnownSet& known, int num_actions) {
  RewardTable table =
      RewardTable::zeros(known.num_states, num_actions, known.horizon);
  for (int h = 0; h < known.horizon; ++h) {
    for (int s = 0; s < known.num_states; ++s) {
      if (known.is_known(h, s)) continue;
      for (int a = 0; a < num_actions; ++a) table.reward(h, s, a) = 1.0;
    }
  }
  return table;
}

std::vector<RmaxSnapshot> zero_rmax_explore(const SampleOnlyEnv& env,
                                            int episodes, int m, Rng& rng) {
  if (episodes < 1) throw ValidationError("need at least one episode");
  if (m < 1) throw ValidationError("known-set threshold m must be >= 1");
  const int S = env.num_states(), A = env.num_actions(), H = env.horizon();

  std::vector<RmaxSnapshot> snapshots;
  snapshots.reserve(static_cast<std::size_t>(episodes));
  RmaxSnapshot current{0, fresh_model(S, A, H), classify(fresh_model(S, A, H), m)};
  std::vector<int> actions(static_cast<std::size_t>(H) * S, 0);
  for (int i = 1; i <= episodes; ++i) {
    // Solve the surrogate for the counts gathered so far.
    TabularMdp surrogate = rmax_surrogate_mdp(current);
    RewardTable explore_reward = rmax_exploration_reward(current.known, A);
    SolvedPolicy solved = value_iteration(surrogate, explore_reward);
    // The greedy policy is kept on known states; on unknown states all
    // actions tie under the surrogate, so play the least-sampled one to
    // make progress toward the m-sample threshold.
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        int choice;
        if (current.known.is_known(h, s)) {
          choice = 0;
          double best = solved.policy.prob(h, s, 0);
          for (int a = 1; a < A; ++a) {
            if (solved.policy.prob(h, s, a) > best) {
              best = solved.policy.prob(h, s, a);
              choice = a;
            }
          }
        } else {
          choice = 0;
          std::int64_t fewest = current.model.count(h, s, 0);
          for (int a = 1; a < A; ++a) {
            if (current.model.count(h, s, a) < fewest) {
              fewest = current.model.count(h, s, a);
              choice = a;
            }
          }
        }
        actions[static_cast<std::size_t>(h) * S + s] = choice;
      }
    }
    StochasticPolicy executed = StochasticPolicy::deterministic(S, A, H, actions);
    Rng episode_rng = rng.split(static_cast<std::uint64_t>(i));
    Trajectory traj = env.sample(executed, episode_rng);
    for (int h = 0; h < H; ++h) {
      std::size_t sa = sa_index(S, A, h, traj.states[h], traj.actions[h]);
      current.model.counts2[sa] += 1;
      current.model.counts3[sa * static_cast<std::size_t>(S) +
                            traj.states[h + 1]] += 1;
    }
    refresh_p_hat(current.model);
    current.known = classify(current.model, m);
    current.episode = i;
    snapshots.push_back(current);
  }
  return snapshots;
}

StochasticPolicy zero_rmax_plan(std::span<const RmaxSnapshot> snapshots,
                                const RewardTable& reward, SnapshotRule rule,
                                Rng& rng) {
  if (snapshots.empty()) {
    throw ValidationError("zero_rmax_plan needs at least one snapshot");
  }
  std::size_t pick = rule == SnapshotRule::kLast
                         ? snapshots.size() - 1
                         : static_cast<std::size_t>(
                               rng.uniform_int(static_cast<int>(snapshots.size())));
  const RmaxSnapshot& snap = snapshots[pick];
  TabularMdp planning = rmax_surrogate_mdp(snap);
  if (reward.num_states() != planning.num_states() ||
      reward.num_actions() != planning.num_actions() ||
      reward.horizon() != planning.horizon()) {
    throw ValidationError("reward dimensions do not match the snapshots");
  }
  return value_iteration(planning, reward).policy;
}

}  // namespace rfx
