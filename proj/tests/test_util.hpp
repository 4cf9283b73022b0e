#ifndef RFX_TESTS_TEST_UTIL_HPP
#define RFX_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "rfx/dp.hpp"
#include "rfx/instances.hpp"
#include "rfx/mdp.hpp"
#include "rfx/rng.hpp"

namespace rfx::test {

// Policy with Dirichlet(1) action rows, for property tests over stochastic
// policies.
inline StochasticPolicy random_policy(int S, int A, int H, Rng& rng) {
  std::vector<double> pi(static_cast<std::size_t>(H) * S * A);
  for (std::size_t row = 0; row < static_cast<std::size_t>(H) * S; ++row) {
    rng.dirichlet(1.0, {pi.data() + row * A, static_cast<std::size_t>(A)});
  }
  return {S, A, H, std::move(pi)};
}

inline RewardTable random_reward_table(int S, int A, int H, Rng& rng) {
  std::vector<double> r(static_cast<std::size_t>(H) * S * A);
  for (double& cell : r) cell = rng.uniform01();
  return {S, A, H, std::move(r)};
}

// Best-case reach probabilities computed the slow way: enumerate every
// deterministic policy and take the max occupancy marginal per (h, s).
// Ground truth for the reach recursion on small instances.
inline std::vector<double> reach_by_enumeration(const TabularMdp& mdp) {
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  const int rows = S * H;
  std::uint64_t total = 1;
  for (int i = 0; i < rows; ++i) total *= static_cast<std::uint64_t>(A);
  std::vector<double> best(static_cast<std::size_t>(H) * S, 0.0);
  std::vector<int> actions(rows);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rem = idx;
    for (int i = 0; i < rows; ++i) {
      actions[i] = static_cast<int>(rem % A);
      rem /= A;
    }
    StochasticPolicy pi = StochasticPolicy::deterministic(S, A, H, actions);
    OccupancyMeasure occ = occupancy(mdp, pi);
    for (std::size_t g = 0; g < best.size(); ++g) {
      best[g] = std::max(best[g], occ.marginals[g]);
    }
  }
  return best;
}

// Deterministic "advance or stay" chain: action 0 moves to min(s+1, S-1),
// action 1 stays.  Start state 0.
inline TabularMdp advance_stay_chain(int S, int H) {
  const int A = 2;
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S, 0.0);
  auto at = [&](int h, int s, int a, int s2) -> double& {
    return P[((static_cast<std::size_t>(h) * S + s) * A + a) * S + s2];
  };
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      at(h, s, 0, std::min(s + 1, S - 1)) = 1.0;
      at(h, s, 1, s) = 1.0;
    }
  }
  std::vector<double> p1(S, 0.0);
  p1[0] = 1.0;
  return {S, A, H, std::move(P), std::move(p1)};
}

}  // namespace rfx::test

#endif  // RFX_TESTS_TEST_UTIL_HPP
