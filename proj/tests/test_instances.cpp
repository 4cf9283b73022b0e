#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "rfx/dp.hpp"
#include "rfx/errors.hpp"
#include "rfx/instances.hpp"
#include "rfx/mdp.hpp"
#include "rfx/rng.hpp"
#include "test_util.hpp"

using namespace rfx;

TEST_CASE("instances: the toy example is a valid MDP with the stated shape") {
  TabularMdp toy = toy_significance_mdp();
  CHECK(toy.num_states() == 5);
  CHECK(toy.num_actions() == 2);
  CHECK(toy.horizon() == 2);
  CHECK(validate_mdp(toy).empty());
  CHECK(toy.initial(0) == 1.0);
  CHECK(toy.transition(0, 0, 0, 1) == 1.0);
  CHECK(toy.transition(0, 0, 1, 2) == 1e-6);
  CHECK(toy.transition(0, 0, 1, 3) == 1.0 - 1e-6);
  for (int s = 1; s < 5; ++s) {
    for (int a = 0; a < 2; ++a) CHECK(toy.transition(1, s, a, s) == 1.0);
  }
}

TEST_CASE("instances: random MDPs are valid and seed-deterministic") {
  Rng a(5), b(5), c(6);
  TabularMdp m1 = random_mdp(4, 3, 3, 0.7, a);
  TabularMdp m2 = random_mdp(4, 3, 3, 0.7, b);
  TabularMdp m3 = random_mdp(4, 3, 3, 0.7, c);
  CHECK(validate_mdp(m1).empty());
  auto f1 = m1.transitions_flat(), f2 = m2.transitions_flat(),
       f3 = m3.transitions_flat();
  bool same = true, diff = false;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    same &= (f1[i] == f2[i]);
    diff |= (f1[i] != f3[i]);
  }
  CHECK(same);
  CHECK(diff);
  for (int trial = 0; trial < 10; ++trial) {
    TabularMdp spiky = random_mdp(5, 2, 2, 0.1, a);
    CHECK(validate_mdp(spiky).empty());
  }
}

TEST_CASE("instances: horizon-2 hard kernels stay in the near-uniform band") {
  Rng rng(11);
  const int n = 4, A = 3;
  const double eps = 0.3;
  for (int draw = 0; draw < 100; ++draw) {
    TabularMdp mdp = single_state_hard_instance(n, A, eps, rng);
    CHECK(mdp.num_states() == 2 * n + 1);
    CHECK(mdp.horizon() == 2);
    CHECK(validate_mdp(mdp).empty());
    for (int a = 0; a < A; ++a) {
      double sum = 0.0;
      for (int i = 1; i <= 2 * n; ++i) {
        double cell = mdp.transition(0, 0, a, i);
        CHECK(std::abs(cell - 1.0 / (2 * n)) <= eps / (2 * n) + 1e-12);
        sum += cell;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(mdp.transition(0, 0, a, 0) == 0.0);
    }
    // Leaves absorb at both steps.
    for (int i = 1; i <= 2 * n; ++i) {
      CHECK(mdp.transition(1, i, 0, i) == 1.0);
    }
  }
}

TEST_CASE("instances: explicit hard kernels are validated, not repaired") {
  const int n = 2, A = 1;
  const double eps = 0.4;
  std::vector<double> good = {0.25 + eps / 4, 0.25 - eps / 4,
                              0.25 + eps / 4, 0.25 - eps / 4};
  CHECK_NOTHROW(single_state_hard_instance(n, A, eps, good));
  std::vector<double> out_of_band = {0.25 + 2 * eps / 4, 0.25 - 2 * eps / 4,
                                     0.25, 0.25};
  CHECK_THROWS_AS(single_state_hard_instance(n, A, eps, out_of_band),
                  ValidationError);
  std::vector<double> bad_sum = {0.25, 0.25, 0.25, 0.2};
  CHECK_THROWS_AS(single_state_hard_instance(n, A, eps, bad_sum),
                  ValidationError);
}

TEST_CASE("instances: the value of an action is its kernel dotted with nu") {
  Rng rng(13);
  const int n = 4, A = 3;
  const double eps = 0.5;
  TabularMdp mdp = single_state_hard_instance(n, A, eps, rng);
  std::vector<double> nu(2 * n);
  for (double& x : nu) x = rng.uniform01();
  RewardTable r = single_state_reward(n, A, nu);
  for (int a = 0; a < A; ++a) {
    std::vector<int> actions(mdp.num_states() * 2, a);
    StochasticPolicy pi =
        StochasticPolicy::deterministic(mdp.num_states(), A, 2, actions);
    double value = policy_evaluation(mdp, r, pi).initial_value(mdp);
    double inner = 0.0;
    for (int i = 1; i <= 2 * n; ++i) {
      inner += mdp.transition(0, 0, a, i) * nu[i - 1];
    }
    CHECK(std::abs(value - inner) <= 1e-12);
  }
}

TEST_CASE("instances: packing vectors are balanced and weakly correlated") {
  Rng rng(17);
  PackingVectors packing = sample_uncorrelated_packing(64, 2, 4, 0.5, rng, 100);
  CHECK(packing.n == 64);
  CHECK(packing.num_actions == 2);
  CHECK(packing.per_action == 4);
  const int len = 128;
  for (int a = 0; a < 2; ++a) {
    for (int j = 0; j < 4; ++j) {
      auto v = packing.vec(a, j);
      int sum = 0;
      for (auto x : v) {
        CHECK((x == 1 || x == -1));
        sum += x;
      }
      CHECK(sum == 0);
    }
  }
  // Pairwise inner products strictly below 2 n gamma across all pairs.
  for (int p = 0; p < 8; ++p) {
    for (int q = p + 1; q < 8; ++q) {
      auto vp = packing.vec(p / 4, p % 4), vq = packing.vec(q / 4, q % 4);
      int dot = 0;
      for (int i = 0; i < len; ++i) dot += vp[i] * vq[i];
      CHECK(std::abs(dot) < 64);  // 2 * 64 * 0.5
    }
  }
}

TEST_CASE("instances: packing feasibility condition evaluates both ways") {
  CHECK(packing_condition_holds(64, 2, 4, 0.5));
  CHECK_FALSE(packing_condition_holds(64, 2, 4, 0.1));
}

TEST_CASE("instances: impossible packings exhaust their retries") {
  // 20 vectors drawn from the 6 balanced sign vectors of length 4 must
  // repeat, and a repeated pair has inner product 4, far above 2*2*0.01.
  Rng rng(19);
  CHECK_THROWS_AS(sample_uncorrelated_packing(2, 1, 20, 0.01, rng, 50),
                  ValidationError);
}

TEST_CASE("instances: reward vectors from sign vectors stay inside [0, 1]") {
  Rng rng(23);
  PackingVectors packing = sample_uncorrelated_packing(8, 2, 2, 0.9, rng, 100);
  HardRewardSpec spec = packing_reward_vector(packing.vec(0, 0), packing.vec(1, 1));
  CHECK_FALSE(spec.x.has_value());
  CHECK(spec.nu.size() == 16);
  for (double x : spec.nu) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
  // Identical sign vectors give nu = v/2 + 1/2, entries exactly 0 or 1.
  HardRewardSpec same = packing_reward_vector(packing.vec(0, 0), packing.vec(0, 0));
  for (std::size_t i = 0; i < same.nu.size(); ++i) {
    double want = packing.vec(0, 0)[i] > 0 ? 1.0 : 0.0;
    CHECK(same.nu[i] == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("instances: distinct kernels separate by more than eps/12") {
  // Exhaustive check at the adversarial gamma: for every reward built from
  // sign vectors (a1, j1) and (a2, j2), the action/slot pair (a1, j1) beats
  // every other (a', j') by a margin above eps/12.
  Rng rng(400);
  const int n = 64, A = 2, M = 2;
  const double gamma = 0.1, eps = 0.12;
  PackingVectors packing = sample_uncorrelated_packing(n, A, M, gamma, rng, 2000);
  auto kernel_cell = [&](int a, int j, int i) {
    return 1.0 / (2 * n) + (eps / (2 * n)) * packing.vec(a, j)[i];
  };
  int checks = 0;
  for (int a1 = 0; a1 < A; ++a1) {
    for (int j1 = 0; j1 < M; ++j1) {
      for (int a2 = 0; a2 < A; ++a2) {
        if (a2 == a1) continue;
        for (int j2 = 0; j2 < M; ++j2) {
          HardRewardSpec spec =
              packing_reward_vector(packing.vec(a1, j1), packing.vec(a2, j2));
          double best = 0.0;
          for (int i = 0; i < 2 * n; ++i) {
            best += kernel_cell(a1, j1, i) * spec.nu[i];
          }
          for (int ap = 0; ap < A; ++ap) {
            for (int jp = 0; jp < M; ++jp) {
              if (ap == a1 && jp == j1) continue;
              double other = 0.0;
              for (int i = 0; i < 2 * n; ++i) {
                other += kernel_cell(ap, jp, i) * spec.nu[i];
              }
              CHECK(best - other > eps / 12);
              ++checks;
            }
          }
        }
      }
    }
  }
  CHECK(checks == 24);
}

TEST_CASE("instances: tree layout, navigation and reach") {
  Rng rng(29);
  const int n = 4, A = 2, H = 6;
  EmbeddedTreeInstance tree = embedded_tree_instance(n, A, H, 1.0 / 48, rng);
  CHECK(tree.depth == 2);
  CHECK(tree.tree_states() == 15);
  CHECK(tree.mdp.num_states() == 15);
  CHECK(tree.mdp.num_states() <= 4 * n);
  CHECK(validate_mdp(tree.mdp).empty());
  CHECK(tree.mdp.initial(tree.state_of(1, 0)) == 1.0);

  // Deterministic navigation: action 0 keeps x, action 1 adds 2^ell.
  for (int ell = 0; ell < tree.depth; ++ell) {
    for (int x = 1; x <= (1 << ell); ++x) {
      int from = tree.state_of(x, ell);
      CHECK(tree.mdp.transition(ell, from, 0, tree.state_of(x, ell + 1)) == 1.0);
      CHECK(tree.mdp.transition(ell, from, 1,
                                tree.state_of(x + (1 << ell), ell + 1)) == 1.0);
    }
  }

  // Every bottom cell is reachable surely at the aligned step and not at
  // the step before.
  for (int x = 1; x <= n; ++x) {
    int cell = tree.state_of(x, tree.depth);
    CHECK(max_reach(tree.mdp, cell, tree.hard_step()).probability ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_reach(tree.mdp, cell, tree.hard_step() - 1).probability == 0.0);
  }

  // Bottom-cell kernels spread over the shared leaves within the band.
  for (int x = 1; x <= n; ++x) {
    int cell = tree.state_of(x, tree.depth);
    for (int a = 0; a < A; ++a) {
      double sum = 0.0;
      for (int i = 1; i <= 2 * n; ++i) {
        double p = tree.mdp.transition(tree.hard_step(), cell, a, tree.leaf_state(i));
        CHECK(std::abs(p - 1.0 / (2 * n)) <= (1.0 / 48) / (2 * n) + 1e-12);
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("instances: tree construction rejects bad parameters") {
  Rng rng(31);
  CHECK_THROWS_AS(embedded_tree_instance(3, 2, 6, 0.01, rng), ValidationError);
  CHECK_THROWS_AS(embedded_tree_instance(4, 1, 6, 0.01, rng), ValidationError);
  CHECK_THROWS_AS(embedded_tree_instance(4, 2, 5, 0.01, rng), ValidationError);
  CHECK_THROWS_AS(embedded_tree_instance(4, 2, 6, 0.5, rng), ValidationError);
  CHECK_NOTHROW(embedded_tree_instance(4, 2, 6, 1.0 / 48, rng));
}

TEST_CASE("instances: padding states exist but stay unreachable") {
  Rng rng(37);
  EmbeddedTreeInstance tree = embedded_tree_instance(4, 2, 6, 1.0 / 48, rng, 5);
  CHECK(tree.num_padding == 5);
  CHECK(tree.mdp.num_states() == 20);
  CHECK(validate_mdp(tree.mdp).empty());
  for (int h = 0; h < 6; ++h) {
    CHECK(max_reach(tree.mdp, 19, h).probability == 0.0);
  }
}

TEST_CASE("instances: near-optimal policies must pass through the target cell") {
  // With reward 1 at cell (x, depth) and leaf rewards below 1, any policy
  // within 1/4 of optimal must occupy the cell at the aligned step with
  // probability at least 1/2.  Exact optimal policies and small softenings
  // of them both satisfy the hypothesis; verify the conclusion on each.
  Rng rng(41);
  const int n = 4, A = 2, H = 6;
  EmbeddedTreeInstance tree = embedded_tree_instance(n, A, H, 1.0 / 48, rng);
  const int S = tree.mdp.num_states();
  for (int trial = 0; trial < 20; ++trial) {
    int x = 1 + rng.uniform_int(n);
    std::vector<double> nu(2 * n);
    for (double& v : nu) v = rng.uniform01();
    RewardTable r = embedded_reward(tree, x, nu);
    SolvedPolicy opt = value_iteration(tree.mdp, r);
    double vstar = opt.values.initial_value(tree.mdp);

    // The exact optimal policy.
    OccupancyMeasure occ = occupancy(tree.mdp, opt.policy);
    CHECK(occ.marginal(tree.hard_step(), tree.state_of(x, tree.depth)) >=
          0.5 - 1e-12);

    // A softened optimal policy that is still within 1/4 of optimal.
    const double lambda = 0.02;
    std::vector<double> probs(opt.policy.probs_flat().begin(),
                              opt.policy.probs_flat().end());
    for (double& p : probs) p = (1 - lambda) * p + lambda / A;
    StochasticPolicy soft(S, A, H, std::move(probs));
    double vsoft = policy_evaluation(tree.mdp, r, soft).initial_value(tree.mdp);
    REQUIRE(vstar - vsoft <= 0.25);
    OccupancyMeasure occ_soft = occupancy(tree.mdp, soft);
    CHECK(occ_soft.marginal(tree.hard_step(), tree.state_of(x, tree.depth)) >=
          0.5 - 1e-12);
  }
}

TEST_CASE("instances: explicit tree kernels are validated like the flat family") {
  Rng rng(43);
  const int n = 2, A = 2, H = 4;
  const double eps0 = 1.0 / 32;
  std::vector<double> q(n * A * 2 * n, 0.25);
  CHECK_NOTHROW(embedded_tree_instance(n, A, H, eps0, q));
  q[0] = 0.25 + eps0;  // out of the per-cell band, and the row sum drifts
  CHECK_THROWS_AS(embedded_tree_instance(n, A, H, eps0, q), ValidationError);
}

TEST_CASE("instances: hard_kernel_rows follows the chosen packing slots") {
  Rng rng(47);
  PackingVectors packing = sample_uncorrelated_packing(4, 2, 3, 0.99, rng, 500);
  const double eps = 0.4;
  std::vector<int> choice = {2, 0};
  std::vector<double> rows = hard_kernel_rows(packing, choice, eps);
  REQUIRE(rows.size() == 2 * 8);
  for (int a = 0; a < 2; ++a) {
    auto v = packing.vec(a, choice[a]);
    for (int i = 0; i < 8; ++i) {
      CHECK(rows[a * 8 + i] ==
            doctest::Approx(1.0 / 8 + (eps / 8) * v[i]).epsilon(1e-15));
    }
  }
}
