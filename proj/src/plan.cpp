#include "rfx/plan.hpp"

#include <cmath>

#include "rfx/errors.hpp"
#include "rfx/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rfx {

namespace {

std::size_t sa_index(int S, int A, int h, int s, int a) {
  return (static_cast<std::size_t>(h) * S + s) * A + a;
}

void tally(const EpisodeDataset& data, int S, int A,
           std::vector<std::int64_t>& counts3,
           std::vector<std::int64_t>& counts2) {
  const int H = data.horizon;
  for (const Trajectory& traj : data.episodes) {
    if (traj.states.size() != static_cast<std::size_t>(H) + 1 ||
        traj.actions.size() != static_cast<std::size_t>(H)) {
      throw ValidationError("episode length does not match the dataset horizon");
    }
    for (int h = 0; h < H; ++h) {
      int s = traj.states[h], a = traj.actions[h], s2 = traj.states[h + 1];
      if (s < 0 || s >= S || s2 < 0 || s2 >= S || a < 0 || a >= A) {
        throw ValidationError("episode index out of range for the model dims");
      }
      std::size_t sa = sa_index(S, A, h, s, a);
      counts2[sa] += 1;
      counts3[sa * static_cast<std::size_t>(S) + s2] += 1;
    }
  }
}

}  // namespace

EmpiricalModel estimate_model(const EpisodeDataset& data, int num_states,
                              int num_actions) {
  const int S = num_states, A = num_actions, H = data.horizon;
  if (S < 1 || A < 1 || H < 1) {
    throw ValidationError("model dimensions must be positive");
  }
  EmpiricalModel model;
  model.num_states = S;
  model.num_actions = A;
  model.horizon = H;
  model.counts3.assign(static_cast<std::size_t>(H) * S * A * S, 0);
  model.counts2.assign(static_cast<std::size_t>(H) * S * A, 0);

#ifdef _OPENMP
  // Per-thread tally buffers merged afterwards; integer addition makes the
  // merge exact whatever the thread count.
  const std::int64_t total = static_cast<std::int64_t>(data.episodes.size());
  if (total >= 1024) {
    const int workers = max_threads();
    std::vector<std::vector<std::int64_t>> c3(workers), c2(workers);
    for (int w = 0; w < workers; ++w) {
      c3[w].assign(model.counts3.size(), 0);
      c2[w].assign(model.counts2.size(), 0);
    }
    bool bad = false;
#pragma omp parallel num_threads(workers)
    {
      int w = omp_get_thread_num();
#pragma omp for schedule(static)
      for (std::int64_t e = 0; e < total; ++e) {
        const Trajectory& traj = data.episodes[static_cast<std::size_t>(e)];
        if (traj.states.size() != static_cast<std::size_t>(H) + 1 ||
            traj.actions.size() != static_cast<std::size_t>(H)) {
#pragma omp atomic write
          bad = true;
          continue;
        }
        for (int h = 0; h < H; ++h) {
          int s = traj.states[h], a = traj.actions[h], s2 = traj.states[h + 1];
          if (s < 0 || s >= S || s2 < 0 || s2 >= S || a < 0 || a >= A) {
#pragma omp atomic write
            bad = true;
            break;
          }
          std::size_t sa = sa_index(S, A, h, s, a);
          c2[w][sa] += 1;
          c3[w][sa * static_cast<std::size_t>(S) + s2] += 1;
        }
      }
    }
    if (bad) {
      throw ValidationError("dataset contains an episode inconsistent with the dims");
    }
    for (int w = 0; w < workers; ++w) {
      for (std::size_t i = 0; i < model.counts3.size(); ++i) {
        model.counts3[i] += c3[w][i];
      }
      for (std::size_t i = 0; i < model.counts2.size(); ++i) {
        model.counts2[i] += c2[w][i];
      }
    }
  } else {
    tally(data, S, A, model.counts3, model.counts2);
  }
#else
  tally(data, S, A, model.counts3, model.counts2);
#endif

  model.p_hat.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
  parallel_for(static_cast<std::int64_t>(H) * S * A, [&](std::int64_t i) {
    std::size_t row = static_cast<std::size_t>(i) * S;
    std::int64_t visits = model.counts2[static_cast<std::size_t>(i)];
    if (visits == 0) {
      // Self-loop completion for unseen rows: i encodes (h, s, a), and the
      // state index is the middle coordinate.
      int s = static_cast<int>((i / A) % S);
      model.p_hat[row + s] = 1.0;
      return;
    }
    double inv = 1.0 / static_cast<double>(visits);
    for (int s2 = 0; s2 < S; ++s2) {
      model.p_hat[row + s2] = static_cast<double>(model.counts3[row + s2]) * inv;
    }
  });
  return model;
}

TabularMdp empirical_mdp(const EmpiricalModel& model,
                         std::vector<double> initial) {
  return {model.num_states, model.num_actions, model.horizon, model.p_hat,
          std::move(initial)};
}

std::vector<double> empirical_initial(const EpisodeDataset& data,
                                      int num_states) {
  std::vector<double> p1(num_states, 0.0);
  if (data.episodes.empty()) {
    for (double& cell : p1) cell = 1.0 / num_states;
    return p1;
  }
  for (const Trajectory& traj : data.episodes) {
    int s = traj.states.at(0);
    if (s < 0 || s >= num_states) {
      throw ValidationError("initial state out of range");
    }
    p1[s] += 1.0;
  }
  for (double& cell : p1) cell /= static_cast<double>(data.episodes.size());
  return p1;
}

StochasticPolicy npg_update(const StochasticPolicy& pi,
                            const ValueTables& tables, double eta) {
  const int S = pi.num_states(), A = pi.num_actions(), H = pi.horizon();
  if (tables.num_states != S || tables.num_actions != A ||
      tables.horizon != H) {
    throw ValidationError("value tables do not match the policy dims");
  }
  std::vector<double> next(static_cast<std::size_t>(H) * S * A);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      double qmax = tables.qvalue(h, s, 0);
      for (int a = 1; a < A; ++a) qmax = std::max(qmax, tables.qvalue(h, s, a));
      double total = 0.0;
      std::size_t base = (static_cast<std::size_t>(h) * S + s) * A;
      for (int a = 0; a < A; ++a) {
        double w = pi.prob(h, s, a) * std::exp(eta * (tables.qvalue(h, s, a) - qmax));
        next[base + a] = w;
        total += w;
      }
      for (int a = 0; a < A; ++a) next[base + a] /= total;
    }
  }
  return {S, A, H, std::move(next)};
}

NpgResult npg(const TabularMdp& mdp, const RewardTable& reward,
              const NpgConfig& cfg) {
  if (cfg.iterations < 0) throw ValidationError("iterations must be nonnegative");
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  double eta = cfg.eta > 0.0 ? cfg.eta
                             : npg_default_eta(H, A, cfg.iterations);
  NpgResult out{StochasticPolicy::uniform(S, A, H), {}};
  for (int t = 0; t < cfg.iterations; ++t) {
    ValueTables tables = policy_evaluation(mdp, reward, out.policy);
    if (cfg.record_trace) out.trace.push_back(tables.initial_value(mdp));
    out.policy = npg_update(out.policy, tables, eta);
  }
  if (cfg.record_trace) {
    out.trace.push_back(
        policy_evaluation(mdp, reward, out.policy).initial_value(mdp));
  }
  return out;
}

int npg_default_iterations(int horizon, int num_actions, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (num_actions < 2) return 0;  // single action: uniform is already optimal
  double t = 4.0 * std::pow(static_cast<double>(horizon), 3) *
             std::log(static_cast<double>(num_actions)) / (epsilon * epsilon);
  return static_cast<int>(std::ceil(t));
}

double npg_default_eta(int horizon, int num_actions, int iterations) {
  if (iterations <= 0 || num_actions < 2) return 0.0;
  return std::sqrt(std::log(static_cast<double>(num_actions)) /
                   (static_cast<double>(horizon) * iterations));
}

StochasticPolicy plan_on_model(const EmpiricalModel& model,
                               std::vector<double> initial,
                               const RewardTable& reward,
                               const PlanOptions& opts) {
  TabularMdp planning = empirical_mdp(model, std::move(initial));
  if (reward.num_states() != planning.num_states() ||
      reward.num_actions() != planning.num_actions() ||
      reward.horizon() != planning.horizon()) {
    throw ValidationError("reward dimensions do not match the model");
  }
  if (!reward.validate().empty()) {
    throw ValidationError("reward entries must lie in [0, 1]");
  }
  if (opts.solver == PlanSolver::kValueIteration) {
    return value_iteration(planning, reward).policy;
  }
  NpgConfig cfg = opts.npg;
  if (cfg.iterations <= 0) {
    cfg.iterations = npg_default_iterations(planning.horizon(),
                                            planning.num_actions(), opts.epsilon);
  }
  if (cfg.eta <= 0.0) {
    cfg.eta = npg_default_eta(planning.horizon(), planning.num_actions(),
                              cfg.iterations);
  }
  return npg(planning, reward, cfg).policy;
}

StochasticPolicy plan(const EpisodeDataset& data, int num_states,
                      int num_actions, const RewardTable& reward,
                      const PlanOptions& opts) {
  EmpiricalModel model = estimate_model(data, num_states, num_actions);
  return plan_on_model(model, empirical_initial(data, num_states), reward,
                       opts);
}

}  // namespace rfx
