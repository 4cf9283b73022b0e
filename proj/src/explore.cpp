#include "rfx/explore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfx/errors.hpp"
#include "rfx/parallel.hpp"

namespace rfx {

namespace {

// Substream salts, so goal training, data collection and any future
// consumers of the same master stream cannot collide.
constexpr std::uint64_t kGoalPhase = 0x676f616cULL;
constexpr std::uint64_t kDataPhase = 0x64617461ULL;

std::size_t sa_index(int S, int A, int h, int s, int a) {
  return (static_cast<std::size_t>(h) * S + s) * A + a;
}

// Optimistic value iteration over the running empirical model.  Returns the
// greedy action table for the current counts.
void optimistic_greedy(const RegretLearnerConfig& cfg, const RewardTable& reward,
                       int S, int A, int H, double iota,
                       const std::vector<std::int64_t>& counts3,
                       const std::vector<std::int64_t>& counts2,
                       std::vector<int>& actions, std::vector<double>& v,
                       std::vector<double>& vnext) {
  std::fill(vnext.begin(), vnext.end(), 0.0);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        std::int64_t visits = counts2[sa_index(S, A, h, s, a)];
        double qsa;
        if (visits == 0) {
          qsa = static_cast<double>(H);  // maximal optimism until sampled
        } else {
          const std::int64_t* row =
              counts3.data() + sa_index(S, A, h, s, a) * static_cast<std::size_t>(S);
          double inv = 1.0 / static_cast<double>(visits);
          double mean = 0.0, second = 0.0;
          for (int s2 = 0; s2 < S; ++s2) {
            if (row[s2] == 0) continue;
            double p = static_cast<double>(row[s2]) * inv;
            mean += p * vnext[s2];
            second += p * vnext[s2] * vnext[s2];
          }
          double bonus;
          if (cfg.kind == RegretLearnerConfig::Kind::kHoeffding) {
            bonus = cfg.bonus_scale * H * std::sqrt(iota * inv);
          } else {
            double varhat = std::max(0.0, second - mean * mean);
            bonus = cfg.bonus_scale *
                    (std::sqrt(varhat * iota * inv) + H * iota * inv);
          }
          bonus = std::clamp(bonus, 0.0, static_cast<double>(H));
          qsa = reward.reward(h, s, a) + mean + bonus;
          qsa = std::clamp(qsa, 0.0, static_cast<double>(H));
        }
        if (a == 0 || qsa > best) {
          best = qsa;
          best_a = a;
        }
      }
      v[s] = best;
      actions[static_cast<std::size_t>(h) * S + s] = best_a;
    }
    v.swap(vnext);
  }
}

}  // namespace

std::vector<StochasticPolicy> run_regret_learner(const SampleOnlyEnv& env,
                                                 const RewardTable& reward,
                                                 int episodes,
                                                 const RegretLearnerConfig& cfg,
                                                 Rng& rng) {
  const int S = env.num_states(), A = env.num_actions(), H = env.horizon();
  if (reward.num_states() != S || reward.num_actions() != A ||
      reward.horizon() != H) {
    throw ValidationError("reward dimensions do not match the environment");
  }
  if (episodes < 0) throw ValidationError("episode budget must be nonnegative");
  std::vector<StochasticPolicy> played;
  played.reserve(static_cast<std::size_t>(episodes));

  if (cfg.kind == RegretLearnerConfig::Kind::kOracleOptimal) {
    if (cfg.oracle_mdp == nullptr) {
      throw ValidationError("oracle learner needs an oracle model");
    }
    StochasticPolicy best = value_iteration(*cfg.oracle_mdp, reward).policy;
    for (int k = 0; k < episodes; ++k) played.push_back(best);
    return played;
  }

  if (!(cfg.failure_prob > 0.0) || cfg.failure_prob >= 1.0) {
    throw ValidationError("learner failure probability must be in (0, 1)");
  }
  double iota = std::log(static_cast<double>(S) * A * H *
                         std::max(episodes, 1) / cfg.failure_prob);
  std::vector<std::int64_t> counts3(
      static_cast<std::size_t>(H) * S * A * S, 0);
  std::vector<std::int64_t> counts2(static_cast<std::size_t>(H) * S * A, 0);
  std::vector<int> actions(static_cast<std::size_t>(H) * S, 0);
  std::vector<double> v(S), vnext(S);
  for (int k = 0; k < episodes; ++k) {
    optimistic_greedy(cfg, reward, S, A, H, iota, counts3, counts2, actions, v,
                      vnext);
    StochasticPolicy pi = StochasticPolicy::deterministic(S, A, H, actions);
    Rng episode_rng = rng.split(static_cast<std::uint64_t>(k));
    Trajectory traj = env.sample(pi, episode_rng);
    for (int h = 0; h < H; ++h) {
      std::size_t sa = sa_index(S, A, h, traj.states[h], traj.actions[h]);
      counts2[sa] += 1;
      counts3[sa * static_cast<std::size_t>(S) + traj.states[h + 1]] += 1;
    }
    played.push_back(std::move(pi));
  }
  return played;
}

ExploreResult rf_explore(const SampleOnlyEnv& env, int n0, std::int64_t n,
                         const RegretLearnerConfig& cfg, Rng& rng) {
  const int S = env.num_states(), A = env.num_actions(), H = env.horizon();
  if (n0 < 1) throw ValidationError("rf_explore needs n0 >= 1 per goal");
  if (n < 0) throw ValidationError("rf_explore needs n >= 0");

  const int goals = H * S;
  std::vector<std::vector<StochasticPolicy>> blocks(goals);
  const std::vector<double> uniform_row(A, 1.0 / A);
  // Goals are independent given their private substreams; the merge below
  // is in goal order, so the cover layout never depends on scheduling.
  parallel_for(goals, [&](std::int64_t g) {
    int h = static_cast<int>(g) / S;
    int s = static_cast<int>(g) % S;
    RewardTable indicator = RewardTable::indicator(S, A, H, s, h);
    Rng goal_rng = rng.split(kGoalPhase).split(static_cast<std::uint64_t>(g));
    std::vector<StochasticPolicy> block =
        run_regret_learner(env, indicator, n0, cfg, goal_rng);
    for (StochasticPolicy& pi : block) pi.set_action_row(h, s, uniform_row);
    blocks[g] = std::move(block);
  });

  ExploreResult out;
  out.cover.num_states = S;
  out.cover.num_actions = A;
  out.cover.horizon = H;
  out.cover.per_goal.assign(goals, n0);
  out.cover.policies.reserve(static_cast<std::size_t>(goals) * n0);
  for (int g = 0; g < goals; ++g) {
    for (StochasticPolicy& pi : blocks[g]) {
      out.cover.policies.push_back(std::move(pi));
    }
    blocks[g].clear();
  }

  const auto& policies = out.cover.policies;
  out.dataset.horizon = H;
  out.dataset.episodes.resize(static_cast<std::size_t>(n));
  Rng data_rng = rng.split(kDataPhase);
  parallel_for(n, [&](std::int64_t e) {
    Rng episode_rng = data_rng.split(static_cast<std::uint64_t>(e));
    int idx = episode_rng.uniform_int(static_cast<int>(policies.size()));
    out.dataset.episodes[static_cast<std::size_t>(e)] =
        env.sample(policies[idx], episode_rng);
  });
  return out;
}

MixtureDistribution mixture_occupancy(const TabularMdp& mdp,
                                      const PolicyCover& cover) {
  if (cover.policies.empty()) {
    throw ValidationError("mixture_occupancy needs a nonempty cover");
  }
  if (cover.num_states != mdp.num_states() ||
      cover.num_actions != mdp.num_actions() ||
      cover.horizon != mdp.horizon()) {
    throw ValidationError("cover dimensions do not match the MDP");
  }
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  const std::size_t cells = static_cast<std::size_t>(H) * S * A;
  const std::int64_t total = static_cast<std::int64_t>(cover.policies.size());

  // Fixed-size blocks, each summed in index order and merged in block
  // order afterwards: the float result is independent of the thread count.
  const std::int64_t kBlock = 256;
  const std::int64_t num_blocks = (total + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(
      static_cast<std::size_t>(num_blocks));
  parallel_for(num_blocks, [&](std::int64_t b) {
    std::vector<double> acc(cells, 0.0);
    std::int64_t lo = b * kBlock;
    std::int64_t hi = std::min(lo + kBlock, total);
    for (std::int64_t i = lo; i < hi; ++i) {
      OccupancyMeasure occ =
          serial::occupancy(mdp, cover.policies[static_cast<std::size_t>(i)]);
      for (std::size_t c = 0; c < cells; ++c) acc[c] += occ.probs[c];
    }
    partial[static_cast<std::size_t>(b)] = std::move(acc);
  });

  MixtureDistribution mix;
  mix.num_states = S;
  mix.num_actions = A;
  mix.horizon = H;
  mix.mu.assign(cells, 0.0);
  for (std::int64_t b = 0; b < num_blocks; ++b) {
    const std::vector<double>& acc = partial[static_cast<std::size_t>(b)];
    for (std::size_t c = 0; c < cells; ++c) mix.mu[c] += acc[c];
  }
  double inv = 1.0 / static_cast<double>(total);
  for (double& cell : mix.mu) cell *= inv;
  return mix;
}

CoverageResult coverage_ratio(const TabularMdp& mdp,
                              const MixtureDistribution& mu, double delta) {
  if (mu.num_states != mdp.num_states() ||
      mu.num_actions != mdp.num_actions() || mu.horizon != mdp.horizon()) {
    throw ValidationError("mixture dimensions do not match the MDP");
  }
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  SignificanceReport rep = significance(mdp, delta);
  CoverageResult out;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      if (!rep.is_significant(h, s)) continue;
      double reach = rep.reach_at(h, s);
      for (int a = 0; a < A; ++a) {
        double mass = mu.prob(h, s, a);
        double ratio = mass > 0.0
                           ? reach / mass
                           : std::numeric_limits<double>::infinity();
        if (ratio > out.ratio || out.h < 0) {
          out.ratio = ratio;
          out.h = h;
          out.s = s;
          out.a = a;
        }
      }
    }
  }
  return out;
}

}  // namespace rfx
