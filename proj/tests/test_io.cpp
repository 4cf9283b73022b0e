#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rfx/errors.hpp"
#include "rfx/instances.hpp"
#include "rfx/io.hpp"
#include "rfx/mdp.hpp"
#include "rfx/plan.hpp"
#include "rfx/rmax.hpp"
#include "rfx/rng.hpp"
#include "test_util.hpp"

using namespace rfx;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path dir = fs::temp_directory_path() / "rfx_io_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("io: MDP files round-trip doubles exactly and rewrite byte-stable") {
  fs::path path = tmp_dir() / "mdp.json";
  TabularMdp toy = toy_significance_mdp();  // exercises 1e-6 and 1 - 1e-6
  write_mdp(toy, path.string());
  TabularMdp back = read_mdp(path.string());
  CHECK(back.num_states() == toy.num_states());
  CHECK(back.num_actions() == toy.num_actions());
  CHECK(back.horizon() == toy.horizon());
  auto a = toy.transitions_flat(), b = back.transitions_flat();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (int s = 0; s < 5; ++s) CHECK(back.initial(s) == toy.initial(s));

  std::string first = slurp(path);
  fs::path path2 = tmp_dir() / "mdp2.json";
  write_mdp(back, path2.string());
  CHECK(slurp(path2) == first);
}

TEST_CASE("io: awkward doubles survive the round trip") {
  fs::path path = tmp_dir() / "awkward.json";
  const double third = 1.0 / 3.0;
  TabularMdp mdp(2, 1, 1, {third, 1.0 - third, 0.1, 0.9}, {1e-300, 1.0});
  write_mdp(mdp, path.string());
  TabularMdp back = read_mdp(path.string());
  CHECK(back.transition(0, 0, 0, 0) == third);
  CHECK(back.transition(0, 0, 0, 1) == 1.0 - third);
  CHECK(back.transition(0, 1, 0, 0) == 0.1);
  CHECK(back.initial(0) == 1e-300);
}

TEST_CASE("io: reward and policy files round-trip") {
  Rng rng(3);
  fs::path rpath = tmp_dir() / "reward.json";
  RewardTable r = test::random_reward_table(3, 2, 2, rng);
  write_reward(r, rpath.string());
  RewardTable r2 = read_reward(rpath.string());
  auto ra = r.rewards_flat(), rb = r2.rewards_flat();
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i] == rb[i]);

  fs::path ppath = tmp_dir() / "policy.json";
  StochasticPolicy pi = test::random_policy(3, 2, 2, rng);
  write_policy(pi, ppath.string());
  StochasticPolicy pi2 = read_policy(ppath.string());
  auto pa = pi.probs_flat(), pb = pi2.probs_flat();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == pb[i]);
}

TEST_CASE("io: datasets round-trip as JSON lines") {
  Rng gen(5);
  TabularMdp mdp = random_mdp(3, 2, 2, 1.0, gen);
  StochasticPolicy pi = StochasticPolicy::uniform(3, 2, 2);
  Rng rng(7);
  EpisodeDataset data;
  data.horizon = 2;
  for (int i = 0; i < 40; ++i) {
    data.episodes.push_back(sample_episode(mdp, pi, rng));
  }
  fs::path path = tmp_dir() / "data.jsonl";
  write_dataset(data, path.string());

  std::string text = slurp(path);
  std::size_t lines = 0;
  for (char c : text) lines += (c == '\n');
  CHECK(lines == 40);

  EpisodeDataset back = read_dataset(path.string());
  CHECK(back.horizon == 2);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back.episodes[i].states == data.episodes[i].states);
    CHECK(back.episodes[i].actions == data.episodes[i].actions);
  }
}

TEST_CASE("io: covers round-trip with per-goal bookkeeping") {
  TabularMdp toy = toy_significance_mdp();
  SampleOnlyEnv env(toy);
  RegretLearnerConfig cfg;
  Rng rng(9);
  ExploreResult res = rf_explore(env, 3, 0, cfg, rng);
  fs::path path = tmp_dir() / "cover.json";
  write_cover(res.cover, path.string());
  PolicyCover back = read_cover(path.string());
  CHECK(back.num_states == res.cover.num_states);
  CHECK(back.per_goal == res.cover.per_goal);
  REQUIRE(back.policies.size() == res.cover.policies.size());
  for (std::size_t i = 0; i < back.policies.size(); ++i) {
    auto a = res.cover.policies[i].probs_flat(), b = back.policies[i].probs_flat();
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
  }
}

TEST_CASE("io: baseline snapshots reload with reconstructed estimates") {
  TabularMdp chain = test::advance_stay_chain(3, 3);
  SampleOnlyEnv env(chain);
  Rng rng(11);
  auto snapshots = zero_rmax_explore(env, 12, 2, rng);
  fs::path path = tmp_dir() / "snapshots.json";
  write_snapshots(snapshots, path.string());
  auto back = read_snapshots(path.string());
  REQUIRE(back.size() == snapshots.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].episode == snapshots[i].episode);
    CHECK(back[i].model.counts3 == snapshots[i].model.counts3);
    CHECK(back[i].model.counts2 == snapshots[i].model.counts2);
    for (std::size_t j = 0; j < back[i].model.p_hat.size(); ++j) {
      CHECK(back[i].model.p_hat[j] == snapshots[i].model.p_hat[j]);
    }
    CHECK(back[i].known.known == snapshots[i].known.known);
    CHECK(back[i].known.m == snapshots[i].known.m);
  }
}

TEST_CASE("io: packings round-trip and reject non-sign entries") {
  Rng rng(13);
  PackingVectors packing = sample_uncorrelated_packing(4, 2, 2, 0.99, rng, 500);
  fs::path path = tmp_dir() / "packing.json";
  write_packing(packing, path.string());
  PackingVectors back = read_packing(path.string());
  CHECK(back.n == packing.n);
  CHECK(back.num_actions == packing.num_actions);
  CHECK(back.per_action == packing.per_action);
  CHECK(back.gamma == packing.gamma);
  CHECK(back.v == packing.v);

  fs::path bad = tmp_dir() / "bad_packing.json";
  spit(bad,
       R"({"n":1,"A":1,"per_action":1,"gamma":0.5,"vectors":[[1,0]]})" "\n");
  CHECK_THROWS_AS(read_packing(bad.string()), IoError);
}

TEST_CASE("io: missing files raise IoError from every reader") {
  std::string nowhere = (tmp_dir() / "does_not_exist.json").string();
  CHECK_THROWS_AS(read_mdp(nowhere), IoError);
  CHECK_THROWS_AS(read_reward(nowhere), IoError);
  CHECK_THROWS_AS(read_policy(nowhere), IoError);
  CHECK_THROWS_AS(read_dataset(nowhere), IoError);
  CHECK_THROWS_AS(read_cover(nowhere), IoError);
  CHECK_THROWS_AS(read_snapshots(nowhere), IoError);
  CHECK_THROWS_AS(read_packing(nowhere), IoError);
}

TEST_CASE("io: malformed JSON and wrong shapes raise IoError") {
  fs::path garbled = tmp_dir() / "garbled.json";
  spit(garbled, "{not json");
  CHECK_THROWS_AS(read_mdp(garbled.string()), IoError);

  fs::path short_p = tmp_dir() / "short_p.json";
  // P promises H=2 but provides a single step layer.
  spit(short_p,
       R"({"S":2,"A":1,"H":2,"p1":[1.0,0.0],"P":[[[[0.5,0.5]],[[0.5,0.5]]]]})");
  CHECK_THROWS_AS(read_mdp(short_p.string()), IoError);

  fs::path bad_line = tmp_dir() / "bad_line.jsonl";
  spit(bad_line, R"({"states":[0,1],"actions":[]})" "\n");
  CHECK_THROWS_AS(read_dataset(bad_line.string()), IoError);

  fs::path mixed_h = tmp_dir() / "mixed_h.jsonl";
  spit(mixed_h,
       R"({"states":[0,1],"actions":[0]})" "\n"
       R"({"states":[0,1,0],"actions":[0,1]})" "\n");
  CHECK_THROWS_AS(read_dataset(mixed_h.string()), IoError);
}

TEST_CASE("io: reading checks shapes but leaves probabilistic validity alone") {
  fs::path path = tmp_dir() / "off_simplex.json";
  spit(path,
       R"({"S":2,"A":1,"H":1,"p1":[1.0,0.0],"P":[[[[0.7,0.7]],[[1.0,0.0]]]]})");
  TabularMdp mdp = read_mdp(path.string());
  CHECK(mdp.transition(0, 0, 0, 1) == 0.7);
  CHECK_FALSE(validate_mdp(mdp).empty());
}
