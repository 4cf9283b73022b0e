#include "rfx/instances.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "rfx/errors.hpp"

namespace rfx {

namespace {

std::size_t row_offset(int S, int A, int h, int s, int a) {
  return ((static_cast<std::size_t>(h) * S + s) * A + a) * S;
}

// A random shuffle of n plus-ones and n minus-ones.
void balanced_vector(int n, Rng& rng, std::span<std::int8_t> out) {
  for (int i = 0; i < n; ++i) out[i] = 1;
  for (int i = n; i < 2 * n; ++i) out[i] = -1;
  rng.shuffle(out);
}

// Checks one explicit kernel row against the hard-family constraints.
void check_hard_row(std::span<const double> row, int n, double eps,
                    const std::string& label) {
  double uniform = 1.0 / (2.0 * n);
  double band = eps * uniform;
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    double cell = row[i];
    if (cell < 0.0) {
      throw ValidationError(label + ": negative probability at leaf " +
                            std::to_string(i + 1));
    }
    if (std::fabs(cell - uniform) > band + 1e-12) {
      throw ValidationError(label + ": cell " + std::to_string(i + 1) +
                            " deviates from 1/(2n) by more than eps/(2n)");
    }
    sum += cell;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw ValidationError(label + ": row sums to " + std::to_string(sum));
  }
}

void check_eps(double eps) {
  if (!(eps >= 0.0) || eps > 1.0) {
    throw ValidationError("hard-instance accuracy must lie in [0, 1]");
  }
}

}  // namespace

TabularMdp toy_significance_mdp() {
  const int S = 5, A = 2, H = 2;
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S, 0.0);
  for (int h = 0; h < H; ++h) {
    P[row_offset(S, A, h, 0, 0) + 1] = 1.0;
    P[row_offset(S, A, h, 0, 1) + 2] = 1e-6;
    P[row_offset(S, A, h, 0, 1) + 3] = 1.0 - 1e-6;
    for (int s = 1; s < S; ++s) {
      for (int a = 0; a < A; ++a) P[row_offset(S, A, h, s, a) + s] = 1.0;
    }
  }
  std::vector<double> p1(S, 0.0);
  p1[0] = 1.0;
  return {S, A, H, std::move(P), std::move(p1)};
}

TabularMdp random_mdp(int num_states, int num_actions, int horizon,
                      double concentration, Rng& rng) {
  const int S = num_states, A = num_actions, H = horizon;
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        rng.dirichlet(concentration,
                      {P.data() + row_offset(S, A, h, s, a),
                       static_cast<std::size_t>(S)});
      }
    }
  }
  std::vector<double> p1(S);
  rng.dirichlet(concentration, p1);
  return {S, A, H, std::move(P), std::move(p1)};
}

bool packing_condition_holds(int n, int num_actions, int per_action,
                             double gamma) {
  return 2.0 * std::log(static_cast<double>(per_action)) <=
         n * gamma * gamma - std::log(4.0 * n) -
             2.0 * std::log(static_cast<double>(num_actions));
}

PackingVectors sample_uncorrelated_packing(int n, int num_actions,
                                           int per_action, double gamma,
                                           Rng& rng, int max_retries) {
  if (n < 1 || num_actions < 1 || per_action < 1) {
    throw ValidationError("packing dimensions must be positive");
  }
  if (!(gamma > 0.0)) {
    throw ValidationError("packing gamma must be positive");
  }
  const int total = num_actions * per_action;
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  PackingVectors out;
  out.n = n;
  out.num_actions = num_actions;
  out.per_action = per_action;
  out.gamma = gamma;
  out.v.resize(static_cast<std::size_t>(total) * len);
  // Strict bound on |<v, v'>|; inner products of +-1 vectors are integers,
  // so the check below is exact.
  const double cap = 2.0 * n * gamma;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    for (int k = 0; k < total; ++k) {
      balanced_vector(n, rng, {out.v.data() + k * len, len});
    }
    bool ok = true;
    for (int i = 0; i < total && ok; ++i) {
      for (int j = i + 1; j < total && ok; ++j) {
        long dot = 0;
        const std::int8_t* a = out.v.data() + i * len;
        const std::int8_t* b = out.v.data() + j * len;
        for (std::size_t t = 0; t < len; ++t) dot += a[t] * b[t];
        if (std::labs(dot) >= cap) ok = false;
      }
    }
    if (ok) return out;
  }
  throw ValidationError(
      "sample_uncorrelated_packing: no valid draw in " +
      std::to_string(max_retries) +
      " attempts; reduce per_action or raise gamma");
}

HardRewardSpec packing_reward_vector(std::span<const std::int8_t> v1,
                                     std::span<const std::int8_t> v2) {
  if (v1.size() != v2.size() || v1.empty()) {
    throw ValidationError("reward vectors need two equal-length inputs");
  }
  HardRewardSpec spec;
  spec.nu.resize(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i) {
    spec.nu[i] = v1[i] / 3.0 + v2[i] / 6.0 + 0.5;
  }
  return spec;
}

namespace {

// Shared assembly for both horizon-2 variants once q (A rows of 2n leaf
// probabilities) is in hand.
TabularMdp build_single_state(int n, int A, std::span<const double> q) {
  const int S = 2 * n + 1, H = 2;
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S, 0.0);
  for (int h = 0; h < H; ++h) {
    for (int a = 0; a < A; ++a) {
      const double* row = q.data() + static_cast<std::size_t>(a) * 2 * n;
      for (int i = 0; i < 2 * n; ++i) {
        P[row_offset(S, A, h, 0, a) + 1 + i] = row[i];
      }
    }
    for (int s = 1; s < S; ++s) {
      for (int a = 0; a < A; ++a) P[row_offset(S, A, h, s, a) + s] = 1.0;
    }
  }
  std::vector<double> p1(S, 0.0);
  p1[0] = 1.0;
  return {S, A, H, std::move(P), std::move(p1)};
}

std::vector<double> random_hard_rows(int n, int A, double eps, Rng& rng) {
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  std::vector<std::int8_t> v(len);
  std::vector<double> q(static_cast<std::size_t>(A) * len);
  double uniform = 1.0 / (2.0 * n);
  for (int a = 0; a < A; ++a) {
    balanced_vector(n, rng, v);
    for (std::size_t i = 0; i < len; ++i) {
      q[a * len + i] = uniform + eps * uniform * v[i];
    }
  }
  return q;
}

}  // namespace

TabularMdp single_state_hard_instance(int n, int num_actions, double eps,
                                      Rng& rng) {
  if (n < 1 || num_actions < 1) {
    throw ValidationError("single_state_hard_instance needs n >= 1, A >= 1");
  }
  check_eps(eps);
  return build_single_state(n, num_actions,
                            random_hard_rows(n, num_actions, eps, rng));
}

TabularMdp single_state_hard_instance(int n, int num_actions, double eps,
                                      std::span<const double> q) {
  if (n < 1 || num_actions < 1) {
    throw ValidationError("single_state_hard_instance needs n >= 1, A >= 1");
  }
  check_eps(eps);
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  if (q.size() != static_cast<std::size_t>(num_actions) * len) {
    throw ValidationError("kernel must be A x 2n");
  }
  for (int a = 0; a < num_actions; ++a) {
    check_hard_row(q.subspan(a * len, len), n, eps,
                   "action " + std::to_string(a));
  }
  return build_single_state(n, num_actions, q);
}

std::vector<double> hard_kernel_rows(const PackingVectors& packing,
                                     std::span<const int> choice, double eps) {
  check_eps(eps);
  if (choice.size() != static_cast<std::size_t>(packing.num_actions)) {
    throw ValidationError("need one slot choice per action");
  }
  const int n = packing.n;
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  std::vector<double> q(static_cast<std::size_t>(packing.num_actions) * len);
  double uniform = 1.0 / (2.0 * n);
  for (int a = 0; a < packing.num_actions; ++a) {
    int j = choice[a];
    if (j < 0 || j >= packing.per_action) {
      throw ValidationError("slot choice out of range for action " +
                            std::to_string(a));
    }
    auto vec = packing.vec(a, j);
    for (std::size_t i = 0; i < len; ++i) {
      q[a * len + i] = uniform + eps * uniform * vec[i];
    }
  }
  return q;
}

RewardTable single_state_reward(int n, int num_actions,
                                std::span<const double> nu) {
  if (nu.size() != 2 * static_cast<std::size_t>(n)) {
    throw ValidationError("leaf reward vector must have 2n entries");
  }
  const int S = 2 * n + 1, H = 2;
  RewardTable table = RewardTable::zeros(S, num_actions, H);
  for (int h = 0; h < H; ++h) {
    for (int i = 0; i < 2 * n; ++i) {
      for (int a = 0; a < num_actions; ++a) {
        table.reward(h, 1 + i, a) = nu[i];
      }
    }
  }
  return table;
}

int EmbeddedTreeInstance::state_of(int x, int ell) const {
  if (ell < 0 || ell > depth || x < 1 || x > (1 << ell)) {
    throw ValidationError("tree cell out of range");
  }
  return (1 << ell) - 1 + (x - 1);
}

int EmbeddedTreeInstance::leaf_state(int i) const {
  if (i < 1 || i > 2 * n) throw ValidationError("leaf index out of range");
  return 2 * n - 1 + (i - 1);
}

namespace {

EmbeddedTreeInstance build_tree(int n, int A, int H, double eps0,
                                std::span<const double> q, int pad_states,
                                bool validate_q) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw ValidationError("embedded tree needs n a power of two");
  }
  if (A < 2) throw ValidationError("embedded tree needs at least two actions");
  if (pad_states < 0) throw ValidationError("pad_states must be nonnegative");
  int depth = 0;
  while ((1 << depth) < n) ++depth;
  if (H < 2 * (depth + 1)) {
    throw ValidationError("horizon must be at least 2*(log2(n)+1)");
  }
  if (!(eps0 >= 0.0) || eps0 > 1.0 / (8.0 * H)) {
    throw ValidationError("eps0 must lie in [0, 1/(8H)]");
  }
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  if (q.size() != static_cast<std::size_t>(n) * A * len) {
    throw ValidationError("tree kernels must be n x A x 2n");
  }
  if (validate_q) {
    for (int x = 0; x < n; ++x) {
      for (int a = 0; a < A; ++a) {
        check_hard_row(q.subspan((static_cast<std::size_t>(x) * A + a) * len, len),
                       n, eps0,
                       "cell " + std::to_string(x + 1) + " action " +
                           std::to_string(a));
      }
    }
  }

  EmbeddedTreeInstance inst{TabularMdp(1, 1, 1, {1.0}, {1.0}), n, depth,
                            pad_states};
  const int S = inst.tree_states() + pad_states;
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S, 0.0);
  for (int h = 0; h < H; ++h) {
    // Internal navigation layers: action 0 keeps the cell index, any other
    // action shifts it by 2^ell; both drop one layer.
    for (int ell = 0; ell < depth; ++ell) {
      for (int x = 1; x <= (1 << ell); ++x) {
        int from = inst.state_of(x, ell);
        int left = inst.state_of(x, ell + 1);
        int right = inst.state_of(x + (1 << ell), ell + 1);
        P[row_offset(S, A, h, from, 0) + left] = 1.0;
        for (int a = 1; a < A; ++a) {
          P[row_offset(S, A, h, from, a) + right] = 1.0;
        }
      }
    }
    // Hard layer: cell x carries its own near-uniform kernel over the leaves.
    for (int x = 1; x <= n; ++x) {
      int from = inst.state_of(x, depth);
      for (int a = 0; a < A; ++a) {
        const double* row =
            q.data() + (static_cast<std::size_t>(x - 1) * A + a) * len;
        for (int i = 0; i < 2 * n; ++i) {
          P[row_offset(S, A, h, from, a) + inst.leaf_state(i + 1)] = row[i];
        }
      }
    }
    // Leaves and padding absorb.
    for (int s = inst.leaf_state(1); s < S; ++s) {
      for (int a = 0; a < A; ++a) P[row_offset(S, A, h, s, a) + s] = 1.0;
    }
  }
  std::vector<double> p1(S, 0.0);
  p1[0] = 1.0;
  inst.mdp = TabularMdp(S, A, H, std::move(P), std::move(p1));
  return inst;
}

}  // namespace

EmbeddedTreeInstance embedded_tree_instance(int n, int num_actions, int horizon,
                                            double eps0, Rng& rng,
                                            int pad_states) {
  if (n < 1 || (n & (n - 1)) != 0) {
    throw ValidationError("embedded tree needs n a power of two");
  }
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  std::vector<double> q(static_cast<std::size_t>(n) * num_actions * len);
  std::vector<std::int8_t> v(len);
  double uniform = 1.0 / (2.0 * n);
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < num_actions; ++a) {
      balanced_vector(n, rng, v);
      for (std::size_t i = 0; i < len; ++i) {
        q[(static_cast<std::size_t>(x) * num_actions + a) * len + i] =
            uniform + eps0 * uniform * v[i];
      }
    }
  }
  return build_tree(n, num_actions, horizon, eps0, q, pad_states, false);
}

EmbeddedTreeInstance embedded_tree_instance(int n, int num_actions, int horizon,
                                            double eps0,
                                            std::span<const double> q,
                                            int pad_states) {
  return build_tree(n, num_actions, horizon, eps0, q, pad_states, true);
}

RewardTable embedded_reward(const EmbeddedTreeInstance& instance, int x,
                            std::span<const double> nu) {
  const TabularMdp& mdp = instance.mdp;
  if (x < 1 || x > instance.n) {
    throw ValidationError("hard-layer cell out of range");
  }
  if (nu.size() != 2 * static_cast<std::size_t>(instance.n)) {
    throw ValidationError("leaf reward vector must have 2n entries");
  }
  RewardTable table =
      RewardTable::zeros(mdp.num_states(), mdp.num_actions(), mdp.horizon());
  int hard = instance.state_of(x, instance.depth);
  for (int h = 0; h < mdp.horizon(); ++h) {
    for (int a = 0; a < mdp.num_actions(); ++a) {
      table.reward(h, hard, a) = 1.0;
      for (int i = 1; i <= 2 * instance.n; ++i) {
        table.reward(h, instance.leaf_state(i), a) = nu[i - 1];
      }
    }
  }
  return table;
}

}  // namespace rfx
