#include "rfx/dp.hpp"

#include <algorithm>
#include <cmath>

#include "rfx/errors.hpp"
#include "rfx/parallel.hpp"

namespace rfx {

namespace {

void check_reward_match(const TabularMdp& mdp, const RewardTable& r) {
  if (r.num_states() != mdp.num_states() || r.num_actions() != mdp.num_actions() ||
      r.horizon() != mdp.horizon()) {
    throw ValidationError("reward dimensions do not match the MDP");
  }
}

void check_policy_match(const TabularMdp& mdp, const StochasticPolicy& pi) {
  if (pi.num_states() != mdp.num_states() || pi.num_actions() != mdp.num_actions() ||
      pi.horizon() != mdp.horizon()) {
    throw ValidationError("policy dimensions do not match the MDP");
  }
}

std::size_t sa_index(int S, int A, int h, int s, int a) {
  return (static_cast<std::size_t>(h) * S + s) * A + a;
}

ValueTables make_tables(int S, int A, int H) {
  ValueTables t;
  t.num_states = S;
  t.num_actions = A;
  t.horizon = H;
  t.v.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
  t.q.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  return t;
}

OccupancyMeasure make_occupancy(int S, int A, int H) {
  OccupancyMeasure occ;
  occ.num_states = S;
  occ.num_actions = A;
  occ.horizon = H;
  occ.probs.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  occ.marginals.assign(static_cast<std::size_t>(H) * S, 0.0);
  return occ;
}

// Value-only greedy pass for one indicator goal.  Used inside the per-goal
// significance loop, which parallelizes across goals rather than states.
double indicator_optimal_value(const TabularMdp& mdp, int goal_state, int goal_h,
                               std::vector<double>& v, std::vector<double>& vnext) {
  const int S = mdp.num_states(), A = mdp.num_actions();
  std::fill(vnext.begin(), vnext.end(), 0.0);
  for (int h = goal_h; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      for (int a = 0; a < A; ++a) {
        double acc = (h == goal_h && s == goal_state) ? 1.0 : 0.0;
        if (h < goal_h) {
          auto row = mdp.transition_row(h, s, a);
          for (int s2 = 0; s2 < S; ++s2) acc += row[s2] * vnext[s2];
        }
        if (a == 0 || acc > best) best = acc;
      }
      v[s] = best;
    }
    v.swap(vnext);
  }
  double out = 0.0;
  for (int s = 0; s < S; ++s) out += mdp.initial(s) * vnext[s];
  return out;
}

}  // namespace

double ValueTables::initial_value(const TabularMdp& mdp) const {
  if (mdp.num_states() != num_states) {
    throw ValidationError("value table dimensions do not match the MDP");
  }
  double out = 0.0;
  for (int s = 0; s < num_states; ++s) out += mdp.initial(s) * v[s];
  return out;
}

ValueTables policy_evaluation(const TabularMdp& mdp, const RewardTable& reward,
                              const StochasticPolicy& pi) {
  check_reward_match(mdp, reward);
  check_policy_match(mdp, pi);
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  ValueTables t = make_tables(S, A, H);
  for (int h = H - 1; h >= 0; --h) {
    // Each state owns its q row and v cell, so the layer is a clean
    // parallel map; layers stay sequential because of the recursion.
    parallel_for(S, [&, h](std::int64_t si) {
      int s = static_cast<int>(si);
      const double* vnext = t.v.data() + static_cast<std::size_t>(h + 1) * S;
      double vs = 0.0;
      for (int a = 0; a < A; ++a) {
        auto row = mdp.transition_row(h, s, a);
        double acc = reward.reward(h, s, a);
        for (int s2 = 0; s2 < S; ++s2) acc += row[s2] * vnext[s2];
        t.q[sa_index(S, A, h, s, a)] = acc;
        vs += pi.prob(h, s, a) * acc;
      }
      t.v[static_cast<std::size_t>(h) * S + s] = vs;
    });
  }
  return t;
}

SolvedPolicy value_iteration(const TabularMdp& mdp, const RewardTable& reward) {
  check_reward_match(mdp, reward);
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  ValueTables t = make_tables(S, A, H);
  std::vector<int> greedy(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    parallel_for(S, [&, h](std::int64_t si) {
      int s = static_cast<int>(si);
      const double* vnext = t.v.data() + static_cast<std::size_t>(h + 1) * S;
      double best = 0.0;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        auto row = mdp.transition_row(h, s, a);
        double acc = reward.reward(h, s, a);
        for (int s2 = 0; s2 < S; ++s2) acc += row[s2] * vnext[s2];
        t.q[sa_index(S, A, h, s, a)] = acc;
        if (a == 0 || acc > best) {
          best = acc;
          best_a = a;
        }
      }
      t.v[static_cast<std::size_t>(h) * S + s] = best;
      greedy[static_cast<std::size_t>(h) * S + s] = best_a;
    });
  }
  return {std::move(t), StochasticPolicy::deterministic(S, A, H, greedy)};
}

OccupancyMeasure occupancy(const TabularMdp& mdp, const StochasticPolicy& pi) {
  check_policy_match(mdp, pi);
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  OccupancyMeasure occ = make_occupancy(S, A, H);
  std::vector<double> d(mdp.initial_dist().begin(), mdp.initial_dist().end());
  std::vector<double> dnext(S, 0.0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      occ.marginals[static_cast<std::size_t>(h) * S + s] = d[s];
      for (int a = 0; a < A; ++a) {
        occ.probs[sa_index(S, A, h, s, a)] = d[s] * pi.prob(h, s, a);
      }
    }
    // Gather form of the push-forward: each next state accumulates its own
    // sum, so the parallel loop writes disjoint cells deterministically.
    parallel_for(S, [&, h](std::int64_t s2i) {
      int s2 = static_cast<int>(s2i);
      double acc = 0.0;
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          double mass = occ.probs[sa_index(S, A, h, s, a)];
          if (mass > 0.0) acc += mass * mdp.transition(h, s, a, s2);
        }
      }
      dnext[s2] = acc;
    });
    d.swap(dnext);
  }
  return occ;
}

ReachResult max_reach(const TabularMdp& mdp, int goal_state, int goal_h) {
  if (goal_state < 0 || goal_state >= mdp.num_states() || goal_h < 0 ||
      goal_h >= mdp.horizon()) {
    throw ValidationError("reach goal out of range");
  }
  RewardTable indicator = RewardTable::indicator(
      mdp.num_states(), mdp.num_actions(), mdp.horizon(), goal_state, goal_h);
  SolvedPolicy solved = value_iteration(mdp, indicator);
  return {solved.values.initial_value(mdp), std::move(solved.policy)};
}

SignificanceReport significance(const TabularMdp& mdp, double delta) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw ValidationError("significance threshold must be in (0, 1]");
  }
  const int S = mdp.num_states(), H = mdp.horizon();
  SignificanceReport rep;
  rep.num_states = S;
  rep.horizon = H;
  rep.delta = delta;
  rep.reach.assign(static_cast<std::size_t>(H) * S, 0.0);
  rep.significant.assign(static_cast<std::size_t>(H) * S, 0);
  parallel_for(static_cast<std::int64_t>(H) * S, [&](std::int64_t g) {
    int h = static_cast<int>(g) / S;
    int s = static_cast<int>(g) % S;
    std::vector<double> v(S), vnext(S);
    double reach = indicator_optimal_value(mdp, s, h, v, vnext);
    rep.reach[static_cast<std::size_t>(g)] = reach;
    rep.significant[static_cast<std::size_t>(g)] = reach >= delta ? 1 : 0;
  });
  return rep;
}

SolvedPolicy brute_force_optimal(const TabularMdp& mdp, const RewardTable& reward,
                                 std::uint64_t max_policies) {
  check_reward_match(mdp, reward);
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  const int rows = S * H;
  std::uint64_t count = 1;
  for (int i = 0; i < rows; ++i) {
    if (count > max_policies / static_cast<std::uint64_t>(A)) {
      throw ValidationError("brute_force_optimal: A^(S*H) exceeds the policy cap");
    }
    count *= static_cast<std::uint64_t>(A);
  }

  // Policy index -> action table with the most significant digit at
  // (h=0, s=0), so numeric order on indices is lexicographic order on
  // action tables and "lowest index on ties" is schedule-independent.
  auto evaluate = [&](std::uint64_t idx, std::vector<int>& actions,
                      std::vector<double>& v, std::vector<double>& vnext) {
    for (int row = rows - 1; row >= 0; --row) {
      actions[row] = static_cast<int>(idx % static_cast<std::uint64_t>(A));
      idx /= static_cast<std::uint64_t>(A);
    }
    std::fill(vnext.begin(), vnext.end(), 0.0);
    for (int h = H - 1; h >= 0; --h) {
      for (int s = 0; s < S; ++s) {
        int a = actions[h * S + s];
        auto row = mdp.transition_row(h, s, a);
        double acc = reward.reward(h, s, a);
        for (int s2 = 0; s2 < S; ++s2) acc += row[s2] * vnext[s2];
        v[s] = acc;
      }
      v.swap(vnext);
    }
    double out = 0.0;
    for (int s = 0; s < S; ++s) out += mdp.initial(s) * vnext[s];
    return out;
  };

  const std::int64_t kChunk = 4096;
  std::int64_t num_chunks =
      (static_cast<std::int64_t>(count) + kChunk - 1) / kChunk;
  std::vector<double> chunk_best(num_chunks);
  std::vector<std::uint64_t> chunk_arg(num_chunks);
  parallel_for(num_chunks, [&](std::int64_t c) {
    std::vector<int> actions(rows);
    std::vector<double> v(S), vnext(S);
    std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
    std::uint64_t hi = std::min<std::uint64_t>(lo + kChunk, count);
    double best = -1.0;
    std::uint64_t best_idx = lo;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      double val = evaluate(idx, actions, v, vnext);
      if (val > best) {
        best = val;
        best_idx = idx;
      }
    }
    chunk_best[c] = best;
    chunk_arg[c] = best_idx;
  });
  // Strict comparison keeps the lowest index on exact value ties;
  // chunk-local winners are already minimal within their chunk.
  double best = chunk_best[0];
  std::uint64_t best_idx = chunk_arg[0];
  for (std::int64_t c = 1; c < num_chunks; ++c) {
    if (chunk_best[c] > best) {
      best = chunk_best[c];
      best_idx = chunk_arg[c];
    }
  }

  std::vector<int> actions(rows);
  std::vector<double> v(S), vnext(S);
  evaluate(best_idx, actions, v, vnext);
  SolvedPolicy out{ValueTables{}, StochasticPolicy::deterministic(S, A, H, actions)};
  out.values = policy_evaluation(mdp, reward, out.policy);
  return out;
}

double value_difference(const TabularMdp& mdp1, const TabularMdp& mdp2,
                        const RewardTable& reward, const StochasticPolicy& pi) {
  if (mdp1.num_states() != mdp2.num_states() ||
      mdp1.num_actions() != mdp2.num_actions() ||
      mdp1.horizon() != mdp2.horizon()) {
    throw ValidationError("value_difference requires matching dimensions");
  }
  const int S = mdp1.num_states(), A = mdp1.num_actions(), H = mdp1.horizon();
  ValueTables v1 = policy_evaluation(mdp1, reward, pi);
  OccupancyMeasure d2 = occupancy(mdp2, pi);
  double total = 0.0;
  for (int h = 0; h < H; ++h) {
    const double* vnext = v1.v.data() + static_cast<std::size_t>(h + 1) * S;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        double mass = d2.prob(h, s, a);
        if (mass == 0.0) continue;
        auto row1 = mdp1.transition_row(h, s, a);
        auto row2 = mdp2.transition_row(h, s, a);
        double dot = 0.0;
        for (int s2 = 0; s2 < S; ++s2) dot += (row1[s2] - row2[s2]) * vnext[s2];
        total += mass * dot;
      }
    }
  }
  return total;
}

// The serial namespace reimplements the kernels as plain loops, written
// independently of the parallel versions above so the two act as checks on
// each other.
namespace serial {

ValueTables policy_evaluation(const TabularMdp& mdp, const RewardTable& reward,
                              const StochasticPolicy& pi) {
  check_reward_match(mdp, reward);
  check_policy_match(mdp, pi);
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  ValueTables t = make_tables(S, A, H);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double vs = 0.0;
      for (int a = 0; a < A; ++a) {
        double acc = reward.reward(h, s, a);
        for (int s2 = 0; s2 < S; ++s2) {
          acc += mdp.transition(h, s, a, s2) * t.v[(h + 1ul) * S + s2];
        }
        t.q[sa_index(S, A, h, s, a)] = acc;
        vs += pi.prob(h, s, a) * acc;
      }
      t.v[static_cast<std::size_t>(h) * S + s] = vs;
    }
  }
  return t;
}

SolvedPolicy value_iteration(const TabularMdp& mdp, const RewardTable& reward) {
  check_reward_match(mdp, reward);
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  ValueTables t = make_tables(S, A, H);
  std::vector<int> greedy(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        double acc = reward.reward(h, s, a);
        for (int s2 = 0; s2 < S; ++s2) {
          acc += mdp.transition(h, s, a, s2) * t.v[(h + 1ul) * S + s2];
        }
        t.q[sa_index(S, A, h, s, a)] = acc;
        if (a == 0 || acc > best) {
          best = acc;
          best_a = a;
        }
      }
      t.v[static_cast<std::size_t>(h) * S + s] = best;
      greedy[static_cast<std::size_t>(h) * S + s] = best_a;
    }
  }
  return {std::move(t), StochasticPolicy::deterministic(S, A, H, greedy)};
}

OccupancyMeasure occupancy(const TabularMdp& mdp, const StochasticPolicy& pi) {
  check_policy_match(mdp, pi);
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  OccupancyMeasure occ = make_occupancy(S, A, H);
  std::vector<double> d(mdp.initial_dist().begin(), mdp.initial_dist().end());
  for (int h = 0; h < H; ++h) {
    std::vector<double> dnext(S, 0.0);
    for (int s = 0; s < S; ++s) {
      occ.marginals[static_cast<std::size_t>(h) * S + s] = d[s];
      for (int a = 0; a < A; ++a) {
        double mass = d[s] * pi.prob(h, s, a);
        occ.probs[sa_index(S, A, h, s, a)] = mass;
        if (mass > 0.0) {
          for (int s2 = 0; s2 < S; ++s2) {
            dnext[s2] += mass * mdp.transition(h, s, a, s2);
          }
        }
      }
    }
    d = std::move(dnext);
  }
  return occ;
}

SignificanceReport significance(const TabularMdp& mdp, double delta) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw ValidationError("significance threshold must be in (0, 1]");
  }
  const int S = mdp.num_states(), H = mdp.horizon();
  SignificanceReport rep;
  rep.num_states = S;
  rep.horizon = H;
  rep.delta = delta;
  rep.reach.assign(static_cast<std::size_t>(H) * S, 0.0);
  rep.significant.assign(static_cast<std::size_t>(H) * S, 0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      RewardTable ind =
          RewardTable::indicator(S, mdp.num_actions(), H, s, h);
      SolvedPolicy solved = serial::value_iteration(mdp, ind);
      double reach = solved.values.initial_value(mdp);
      rep.reach[static_cast<std::size_t>(h) * S + s] = reach;
      rep.significant[static_cast<std::size_t>(h) * S + s] =
          reach >= delta ? 1 : 0;
    }
  }
  return rep;
}

}  // namespace serial

}  // namespace rfx
