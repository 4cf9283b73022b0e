// Command-line front end.  Subcommands cover instance generation, the
// exploration / planning pipeline, exact evaluation, the known-set baseline,
// and the experiment drivers.  Exit codes: 0 on success, 1 when inputs
// violate an invariant (bad flags, malformed instances), 2 on I/O failure.
// RFX_THREADS caps the worker count of all parallel sections.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfx/dp.hpp"
#include "rfx/errors.hpp"
#include "rfx/explore.hpp"
#include "rfx/harness.hpp"
#include "rfx/instances.hpp"
#include "rfx/io.hpp"
#include "rfx/mdp.hpp"
#include "rfx/plan.hpp"
#include "rfx/rmax.hpp"
#include "rfx/rng.hpp"

namespace {

using ojson = nlohmann::ordered_json;

struct Dims {
  int S = 0, A = 0, H = 0;
};

Dims parse_dims(const std::string& text) {
  Dims d;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> d.S >> c1 >> d.A >> c2 >> d.H) || c1 != ',' || c2 != ',' ||
      !in.eof() || d.S < 1 || d.A < 1 || d.H < 1) {
    throw rfx::ValidationError("--mdp-dims expects S,A,H with positive ints, got \"" +
                               text + "\"");
  }
  return d;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw rfx::ValidationError("expected a comma-separated integer list, got \"" +
                                 text + "\"");
    }
  }
  return out;
}

void require_valid(const rfx::TabularMdp& mdp, const std::string& origin) {
  auto violations = rfx::validate_mdp(mdp);
  if (violations.empty()) return;
  std::string msg = origin + " is not a valid MDP:";
  for (const auto& v : violations) msg += "\n  " + v.describe();
  throw rfx::ValidationError(msg);
}

void emit_json(const ojson& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw rfx::IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw rfx::IoError("write to " + path + " failed");
}

ojson nested(std::span<const double> flat, std::initializer_list<int> dims_init) {
  std::vector<int> dims(dims_init);
  std::vector<std::size_t> strides(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
    strides[i] = strides[i + 1] * dims[i + 1];
  }
  // Recursive lambda over the dimension list.
  std::function<ojson(std::size_t, std::size_t)> build =
      [&](std::size_t level, std::size_t offset) -> ojson {
    ojson arr = ojson::array();
    for (int i = 0; i < dims[level]; ++i) {
      std::size_t at = offset + i * strides[level];
      if (level + 1 == dims.size()) {
        arr.push_back(flat[at]);
      } else {
        arr.push_back(build(level + 1, at));
      }
    }
    return arr;
  };
  return build(0, 0);
}

rfx::RegretLearnerConfig learner_config(const std::string& name,
                                        double bonus_scale, double failure_prob) {
  rfx::RegretLearnerConfig cfg;
  if (name == "bernstein") {
    cfg.kind = rfx::RegretLearnerConfig::Kind::kBernstein;
  } else if (name == "hoeffding") {
    cfg.kind = rfx::RegretLearnerConfig::Kind::kHoeffding;
  } else {
    throw rfx::ValidationError("unknown learner \"" + name +
                               "\" (expected bernstein or hoeffding)");
  }
  cfg.bonus_scale = bonus_scale;
  cfg.failure_prob = failure_prob;
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"reward-free exploration toolkit for tabular episodic MDPs"};
  app.require_subcommand(1);

  // gen: instance generators, one sub-subcommand per family.
  CLI::App* gen = app.add_subcommand("gen", "generate instances and packings");
  gen->require_subcommand(1);

  std::string gen_out, gen_out_reward, gen_packing_in, gen_choice;
  std::uint64_t gen_seed = 0;
  int gen_S = 5, gen_A = 2, gen_H = 3, gen_n = 4, gen_M = 4, gen_pad = 0;
  int gen_retries = 1000, gen_x = 1;
  double gen_conc = 1.0, gen_eps = 0.1, gen_gamma = 0.5;

  CLI::App* gen_toy = gen->add_subcommand("toy", "fixed five-state example");
  gen_toy->add_option("--out", gen_out, "output MDP file")->required();

  CLI::App* gen_random = gen->add_subcommand("random", "Dirichlet random MDP");
  gen_random->add_option("--S", gen_S, "states");
  gen_random->add_option("--A", gen_A, "actions");
  gen_random->add_option("--H", gen_H, "horizon");
  gen_random->add_option("--concentration", gen_conc, "Dirichlet concentration");
  gen_random->add_option("--seed", gen_seed, "seed");
  gen_random->add_option("--out", gen_out, "output MDP file")->required();

  CLI::App* gen_single = gen->add_subcommand(
      "single-hard", "horizon-2 instance with near-uniform kernels");
  gen_single->add_option("--n", gen_n, "half the leaf count");
  gen_single->add_option("--A", gen_A, "actions");
  gen_single->add_option("--eps", gen_eps, "kernel deviation scale");
  gen_single->add_option("--seed", gen_seed, "seed");
  gen_single->add_option("--packing", gen_packing_in,
                         "build kernels from this packing file");
  gen_single->add_option("--choice", gen_choice,
                         "comma list: packing slot per action");
  gen_single->add_option("--out", gen_out, "output MDP file")->required();
  gen_single->add_option("--out-reward", gen_out_reward,
                         "also write a random leaf reward");

  CLI::App* gen_tree = gen->add_subcommand(
      "tree-hard", "binary tree over hard horizon-2 kernels");
  gen_tree->add_option("--n", gen_n, "bottom-layer cell count (power of two)");
  gen_tree->add_option("--A", gen_A, "actions");
  gen_tree->add_option("--H", gen_H, "horizon");
  gen_tree->add_option("--eps0", gen_eps, "kernel deviation scale");
  gen_tree->add_option("--pad", gen_pad, "unreachable padding states");
  gen_tree->add_option("--seed", gen_seed, "seed");
  gen_tree->add_option("--x", gen_x, "target cell for --out-reward (1-based)");
  gen_tree->add_option("--out", gen_out, "output MDP file")->required();
  gen_tree->add_option("--out-reward", gen_out_reward,
                       "also write the target-cell reward with random leaves");

  CLI::App* gen_packing = gen->add_subcommand(
      "packing", "balanced sign vectors with bounded correlations");
  gen_packing->add_option("--n", gen_n, "half vector length");
  gen_packing->add_option("--A", gen_A, "actions");
  gen_packing->add_option("--M", gen_M, "vectors per action");
  gen_packing->add_option("--gamma", gen_gamma, "correlation bound scale");
  gen_packing->add_option("--retries", gen_retries, "max rejection retries");
  gen_packing->add_option("--seed", gen_seed, "seed");
  gen_packing->add_option("--out", gen_out, "output packing file")->required();

  // explore
  CLI::App* explore = app.add_subcommand(
      "explore", "reward-free exploration: policy cover plus dataset");
  std::string ex_mdp, ex_learner = "bernstein", ex_out_data, ex_out_cover;
  int ex_n0 = 0;
  std::int64_t ex_n = 0;
  std::uint64_t ex_seed = 0;
  double ex_bonus = 1.0, ex_fail = 0.01, ex_eps = 0.0;
  explore->add_option("--mdp", ex_mdp, "environment MDP file")->required();
  explore->add_option("--n0", ex_n0, "episodes per goal")->required();
  explore->add_option("--n", ex_n, "mixture episodes")->required();
  explore->add_option("--seed", ex_seed, "seed");
  explore->add_option("--learner", ex_learner, "bernstein | hoeffding");
  explore->add_option("--bonus-scale", ex_bonus, "exploration bonus scale");
  explore->add_option("--failure-prob", ex_fail, "learner failure probability");
  explore->add_option("--out-dataset", ex_out_data, "dataset output")->required();
  explore->add_option("--out-cover", ex_out_cover, "cover output")->required();
  explore->add_option("--report-coverage", ex_eps,
                      "also print the coverage ratio at this accuracy");

  // plan
  CLI::App* plan_cmd = app.add_subcommand(
      "plan", "certainty-equivalence planning on a dataset");
  std::string pl_data, pl_dims, pl_reward, pl_solver = "vi", pl_out, pl_trace;
  double pl_eps = 0.1, pl_eta = 0.0;
  int pl_iters = 0;
  plan_cmd->add_option("--dataset", pl_data, "episode dataset")->required();
  plan_cmd->add_option("--mdp-dims", pl_dims, "S,A,H of the environment")->required();
  plan_cmd->add_option("--reward", pl_reward, "reward file")->required();
  plan_cmd->add_option("--solver", pl_solver, "vi | npg");
  plan_cmd->add_option("--eps", pl_eps, "target accuracy for the npg schedule");
  plan_cmd->add_option("--eta", pl_eta, "npg step size override");
  plan_cmd->add_option("--iters", pl_iters, "npg iteration override");
  plan_cmd->add_option("--out-policy", pl_out, "policy output")->required();
  plan_cmd->add_option("--emit-trace", pl_trace, "CSV of t,value npg iterates");

  // eval
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "exact values of a policy against the true model");
  std::string ev_mdp, ev_reward, ev_policy, ev_out, ev_values, ev_occupancy;
  eval_cmd->add_option("--mdp", ev_mdp, "true MDP file")->required();
  eval_cmd->add_option("--reward", ev_reward, "reward file")->required();
  eval_cmd->add_option("--policy", ev_policy, "policy to score (optional)");
  eval_cmd->add_option("--out", ev_out, "write the JSON report here");
  eval_cmd->add_option("--out-values", ev_values,
                       "write the policy's value tables");
  eval_cmd->add_option("--out-occupancy", ev_occupancy,
                       "write the policy's occupancy tensors");

  // e2e
  CLI::App* e2e_cmd = app.add_subcommand(
      "e2e", "explore once, plan for a reward suite, score exactly");
  std::string e2e_config, e2e_outdir;
  e2e_cmd->add_option("--config", e2e_config, "experiment config JSON")->required();
  e2e_cmd->add_option("--outdir", e2e_outdir, "override the output directory");

  // rmax
  CLI::App* rmax_cmd = app.add_subcommand(
      "rmax", "known-set baseline exploration");
  std::string rm_mdp, rm_out;
  int rm_episodes = 0, rm_m = 1;
  std::uint64_t rm_seed = 0;
  rmax_cmd->add_option("--mdp", rm_mdp, "environment MDP file")->required();
  rmax_cmd->add_option("--episodes", rm_episodes, "exploration episodes")->required();
  rmax_cmd->add_option("--m", rm_m, "known-state visit threshold");
  rmax_cmd->add_option("--seed", rm_seed, "seed");
  rmax_cmd->add_option("--out-snapshots", rm_out, "snapshot output")->required();

  // rmax-plan
  CLI::App* rmax_plan_cmd = app.add_subcommand(
      "rmax-plan", "plan from the baseline's exploration record");
  std::string rp_snapshots, rp_reward, rp_out, rp_rule = "random";
  std::uint64_t rp_seed = 0;
  rmax_plan_cmd->add_option("--snapshots", rp_snapshots, "snapshot file")->required();
  rmax_plan_cmd->add_option("--reward", rp_reward, "reward file")->required();
  rmax_plan_cmd->add_option("--snapshot", rp_rule,
                            "which snapshot: random | last");
  rmax_plan_cmd->add_option("--seed", rp_seed, "seed for the random rule");
  rmax_plan_cmd->add_option("--out-policy", rp_out, "policy output")->required();

  // compare
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "matched-budget comparison against the baseline");
  std::string cmp_config, cmp_outdir;
  compare_cmd->add_option("--config", cmp_config, "experiment config JSON")->required();
  compare_cmd->add_option("--outdir", cmp_outdir, "override the output directory");

  // budgets
  CLI::App* budgets_cmd = app.add_subcommand(
      "budgets", "sample-size formulas for a problem size");
  int bu_S = 0, bu_A = 0, bu_H = 0;
  double bu_eps = 0.1, bu_p = 0.1;
  budgets_cmd->add_option("--S", bu_S, "states")->required();
  budgets_cmd->add_option("--A", bu_A, "actions")->required();
  budgets_cmd->add_option("--H", bu_H, "horizon")->required();
  budgets_cmd->add_option("--eps", bu_eps, "target accuracy");
  budgets_cmd->add_option("--p", bu_p, "failure probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every other parse problem is a bad
    // invocation and lands on the invariant-violation code.
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (gen_toy->parsed()) {
    rfx::write_mdp(rfx::toy_significance_mdp(), gen_out);
  } else if (gen_random->parsed()) {
    rfx::Rng rng(gen_seed);
    rfx::write_mdp(rfx::random_mdp(gen_S, gen_A, gen_H, gen_conc, rng), gen_out);
  } else if (gen_single->parsed()) {
    rfx::Rng rng(gen_seed);
    std::optional<rfx::TabularMdp> mdp;
    if (!gen_packing_in.empty()) {
      rfx::PackingVectors packing = rfx::read_packing(gen_packing_in);
      std::vector<int> choice;
      if (gen_choice.empty()) {
        choice.assign(packing.num_actions, 0);
      } else {
        choice = parse_int_list(gen_choice);
      }
      std::vector<double> q = rfx::hard_kernel_rows(packing, choice, gen_eps);
      mdp.emplace(rfx::single_state_hard_instance(packing.n, packing.num_actions,
                                                  gen_eps, q));
      gen_n = packing.n;
      gen_A = packing.num_actions;
    } else {
      mdp.emplace(rfx::single_state_hard_instance(gen_n, gen_A, gen_eps, rng));
    }
    rfx::write_mdp(*mdp, gen_out);
    if (!gen_out_reward.empty()) {
      rfx::Rng nu_rng = rng.split(1);
      std::vector<double> nu(2 * gen_n);
      for (double& v : nu) v = nu_rng.uniform01();
      rfx::write_reward(rfx::single_state_reward(gen_n, gen_A, nu), gen_out_reward);
    }
  } else if (gen_tree->parsed()) {
    rfx::Rng rng(gen_seed);
    rfx::EmbeddedTreeInstance tree =
        rfx::embedded_tree_instance(gen_n, gen_A, gen_H, gen_eps, rng, gen_pad);
    rfx::write_mdp(tree.mdp, gen_out);
    if (!gen_out_reward.empty()) {
      if (gen_x < 1 || gen_x > gen_n) {
        throw rfx::ValidationError("--x must be in [1, n]");
      }
      rfx::Rng nu_rng = rng.split(1);
      std::vector<double> nu(2 * gen_n);
      for (double& v : nu) v = nu_rng.uniform01();
      rfx::write_reward(rfx::embedded_reward(tree, gen_x, nu), gen_out_reward);
    }
  } else if (gen_packing->parsed()) {
    rfx::Rng rng(gen_seed);
    rfx::write_packing(rfx::sample_uncorrelated_packing(gen_n, gen_A, gen_M,
                                                        gen_gamma, rng,
                                                        gen_retries),
                       gen_out);
  } else if (explore->parsed()) {
    rfx::TabularMdp mdp = rfx::read_mdp(ex_mdp);
    require_valid(mdp, ex_mdp);
    if (ex_n0 < 1 || ex_n < 0) {
      throw rfx::ValidationError("--n0 must be >= 1 and --n >= 0");
    }
    rfx::SampleOnlyEnv env(mdp);
    rfx::RegretLearnerConfig cfg = learner_config(ex_learner, ex_bonus, ex_fail);
    rfx::Rng rng(ex_seed);
    rfx::ExploreResult res = rfx::rf_explore(env, ex_n0, ex_n, cfg, rng);
    rfx::write_cover(res.cover, ex_out_cover);
    rfx::write_dataset(res.dataset, ex_out_data);
    std::cout << "cover policies: " << res.cover.policies.size()
              << "\ndataset episodes: " << res.dataset.size() << "\n";
    if (ex_eps > 0.0) {
      double delta = ex_eps / (2.0 * mdp.num_states() * mdp.horizon() * mdp.horizon());
      rfx::MixtureDistribution mu = rfx::mixture_occupancy(mdp, res.cover);
      rfx::CoverageResult cov = rfx::coverage_ratio(mdp, mu, delta);
      std::cout << "coverage ratio at delta=" << delta << ": " << cov.ratio
                << " (witness h=" << cov.h << " s=" << cov.s << " a=" << cov.a
                << ")\n";
    }
  } else if (plan_cmd->parsed()) {
    Dims dims = parse_dims(pl_dims);
    rfx::EpisodeDataset data = rfx::read_dataset(pl_data);
    rfx::RewardTable reward = rfx::read_reward(pl_reward);
    rfx::PlanOptions opts;
    if (pl_solver == "vi") {
      opts.solver = rfx::PlanSolver::kValueIteration;
      if (!pl_trace.empty()) {
        throw rfx::ValidationError("--emit-trace requires --solver npg");
      }
    } else if (pl_solver == "npg") {
      opts.solver = rfx::PlanSolver::kNaturalPolicyGradient;
    } else {
      throw rfx::ValidationError("unknown solver \"" + pl_solver + "\"");
    }
    opts.epsilon = pl_eps;
    opts.npg.eta = pl_eta;
    opts.npg.iterations = pl_iters;
    opts.npg.record_trace = !pl_trace.empty();
    if (opts.npg.record_trace) {
      // Reproduce plan()'s model internally so the trace can be captured.
      rfx::EmpiricalModel model = rfx::estimate_model(data, dims.S, dims.A);
      if (reward.num_states() != dims.S || reward.num_actions() != dims.A ||
          reward.horizon() != dims.H) {
        throw rfx::ValidationError("reward dimensions do not match --mdp-dims");
      }
      rfx::TabularMdp emp =
          rfx::empirical_mdp(model, rfx::empirical_initial(data, dims.S));
      rfx::NpgConfig npg_cfg = opts.npg;
      if (npg_cfg.iterations <= 0) {
        npg_cfg.iterations =
            rfx::npg_default_iterations(dims.H, dims.A, opts.epsilon);
      }
      if (npg_cfg.eta <= 0.0) {
        npg_cfg.eta = rfx::npg_default_eta(dims.H, dims.A, npg_cfg.iterations);
      }
      rfx::NpgResult res = rfx::npg(emp, reward, npg_cfg);
      rfx::write_policy(res.policy, pl_out);
      std::ofstream trace(pl_trace);
      if (!trace) throw rfx::IoError("cannot open " + pl_trace + " for writing");
      trace << "t,value\n";
      char buf[64];
      for (std::size_t t = 0; t < res.trace.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", t, res.trace[t]);
        trace << buf;
      }
      if (!trace) throw rfx::IoError("write to " + pl_trace + " failed");
    } else {
      rfx::StochasticPolicy pi = rfx::plan(data, dims.S, dims.A, reward, opts);
      rfx::write_policy(pi, pl_out);
    }
  } else if (eval_cmd->parsed()) {
    rfx::TabularMdp mdp = rfx::read_mdp(ev_mdp);
    require_valid(mdp, ev_mdp);
    rfx::RewardTable reward = rfx::read_reward(ev_reward);
    if (reward.num_states() != mdp.num_states() ||
        reward.num_actions() != mdp.num_actions() ||
        reward.horizon() != mdp.horizon()) {
      throw rfx::ValidationError("reward dimensions do not match the MDP");
    }
    rfx::SolvedPolicy opt = rfx::value_iteration(mdp, reward);
    double v_star = opt.values.initial_value(mdp);
    ojson report;
    report["optimal_value"] = v_star;
    if (!ev_policy.empty()) {
      rfx::StochasticPolicy pi = rfx::read_policy(ev_policy);
      if (pi.num_states() != mdp.num_states() ||
          pi.num_actions() != mdp.num_actions() ||
          pi.horizon() != mdp.horizon()) {
        throw rfx::ValidationError("policy dimensions do not match the MDP");
      }
      if (!pi.validate().empty()) {
        throw rfx::ValidationError(ev_policy + " has non-simplex action rows");
      }
      rfx::ValueTables tables = rfx::policy_evaluation(mdp, reward, pi);
      double v_pi = tables.initial_value(mdp);
      report["policy_value"] = v_pi;
      report["gap"] = v_star - v_pi;
      if (!ev_values.empty()) {
        ojson vt;
        vt["v"] = nested(tables.v, {mdp.horizon() + 1, mdp.num_states()});
        vt["q"] = nested(tables.q,
                         {mdp.horizon(), mdp.num_states(), mdp.num_actions()});
        emit_json(vt, ev_values);
      }
      if (!ev_occupancy.empty()) {
        rfx::OccupancyMeasure occ = rfx::occupancy(mdp, pi);
        ojson ot;
        ot["probs"] = nested(occ.probs,
                             {mdp.horizon(), mdp.num_states(), mdp.num_actions()});
        ot["marginals"] = nested(occ.marginals, {mdp.horizon(), mdp.num_states()});
        emit_json(ot, ev_occupancy);
      }
    } else if (!ev_values.empty() || !ev_occupancy.empty()) {
      throw rfx::ValidationError("--out-values/--out-occupancy need --policy");
    }
    emit_json(report, ev_out);
  } else if (e2e_cmd->parsed()) {
    rfx::ExperimentConfig cfg = rfx::read_experiment_config(e2e_config);
    if (!e2e_outdir.empty()) cfg.outdir = e2e_outdir;
    rfx::E2eResult res = rfx::run_e2e(cfg);
    std::cout << res.csv();
    if (!cfg.outdir.empty()) rfx::write_e2e_results(res, cfg.outdir);
  } else if (rmax_cmd->parsed()) {
    rfx::TabularMdp mdp = rfx::read_mdp(rm_mdp);
    require_valid(mdp, rm_mdp);
    if (rm_episodes < 1 || rm_m < 1) {
      throw rfx::ValidationError("--episodes and --m must be >= 1");
    }
    rfx::SampleOnlyEnv env(mdp);
    rfx::Rng rng(rm_seed);
    auto snapshots = rfx::zero_rmax_explore(env, rm_episodes, rm_m, rng);
    rfx::write_snapshots(snapshots, rm_out);
    std::cout << "snapshots: " << snapshots.size()
              << "\nknown pairs at end: " << snapshots.back().known.known_count()
              << "\n";
  } else if (rmax_plan_cmd->parsed()) {
    auto snapshots = rfx::read_snapshots(rp_snapshots);
    rfx::RewardTable reward = rfx::read_reward(rp_reward);
    rfx::SnapshotRule rule;
    if (rp_rule == "random") {
      rule = rfx::SnapshotRule::kUniformRandom;
    } else if (rp_rule == "last") {
      rule = rfx::SnapshotRule::kLast;
    } else {
      throw rfx::ValidationError("--snapshot must be random or last");
    }
    rfx::Rng rng(rp_seed);
    rfx::write_policy(rfx::zero_rmax_plan(snapshots, reward, rule, rng), rp_out);
  } else if (compare_cmd->parsed()) {
    rfx::ExperimentConfig cfg = rfx::read_experiment_config(cmp_config);
    if (!cmp_outdir.empty()) cfg.outdir = cmp_outdir;
    rfx::ComparisonResult res = rfx::run_baseline_comparison(cfg);
    std::cout << res.csv();
    if (!cfg.outdir.empty()) rfx::write_comparison_results(res, cfg.outdir);
  } else if (budgets_cmd->parsed()) {
    rfx::TheoreticalBudgets b =
        rfx::theoretical_budgets(bu_S, bu_A, bu_H, bu_eps, bu_p);
    ojson j;
    j["delta"] = b.delta;
    j["iota"] = b.iota;
    j["iota0"] = b.iota0;
    j["n_episodes"] = b.n_episodes;
    j["n0_coverage"] = b.n0_coverage;
    j["n0_planning"] = b.n0_planning;
    j["npg_iterations"] = b.npg_iterations;
    j["npg_eta"] = b.npg_eta;
    emit_json(j, "");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rfx::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const rfx::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
