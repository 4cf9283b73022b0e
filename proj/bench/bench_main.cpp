// Timing comparison between the parallel dynamic-programming kernels and
// their serial reference implementations.  Each kernel runs on instances
// large enough for the parallel sections to matter; times are medians over
// repeated runs after a warmup pass.  Set RFX_THREADS to control the worker
// count of the parallel side.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rfx/dp.hpp"
#include "rfx/instances.hpp"
#include "rfx/mdp.hpp"
#include "rfx/parallel.hpp"
#include "rfx/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_median_ms(const std::function<void()>& body, int reps) {
  body();  // warmup
  std::vector<double> ms(reps);
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    body();
    auto t1 = Clock::now();
    ms[r] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  std::sort(ms.begin(), ms.end());
  return ms[reps / 2];
}

struct Row {
  std::string name;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
};

// Keeps the optimizer from discarding the kernel outputs.
volatile double g_sink = 0.0;

}  // namespace

int main() {
  const int reps = 7;
  std::vector<Row> rows;

  rfx::Rng rng(20240817);
  rfx::TabularMdp big = rfx::random_mdp(240, 6, 8, 1.0, rng);
  rfx::TabularMdp mid = rfx::random_mdp(72, 4, 6, 1.0, rng);
  rfx::StochasticPolicy pi = rfx::StochasticPolicy::uniform(240, 6, 8);
  rfx::RewardTable reward = rfx::RewardTable::zeros(240, 6, 8);
  for (int h = 0; h < 8; ++h)
    for (int s = 0; s < 240; ++s)
      for (int a = 0; a < 6; ++a) reward.reward(h, s, a) = rng.uniform01();
  rfx::RewardTable reward_mid = rfx::RewardTable::zeros(72, 4, 6);
  for (int h = 0; h < 6; ++h)
    for (int s = 0; s < 72; ++s)
      for (int a = 0; a < 4; ++a) reward_mid.reward(h, s, a) = rng.uniform01();

  {
    Row r{"policy_evaluation S=240 A=6 H=8"};
    r.serial_ms = time_median_ms(
        [&] { g_sink = rfx::serial::policy_evaluation(big, reward, pi).v[0]; },
        reps);
    r.parallel_ms = time_median_ms(
        [&] { g_sink = rfx::policy_evaluation(big, reward, pi).v[0]; }, reps);
    rows.push_back(r);
  }
  {
    Row r{"value_iteration S=240 A=6 H=8"};
    r.serial_ms = time_median_ms(
        [&] { g_sink = rfx::serial::value_iteration(big, reward).values.v[0]; },
        reps);
    r.parallel_ms = time_median_ms(
        [&] { g_sink = rfx::value_iteration(big, reward).values.v[0]; }, reps);
    rows.push_back(r);
  }
  {
    Row r{"occupancy S=240 A=6 H=8"};
    r.serial_ms = time_median_ms(
        [&] { g_sink = rfx::serial::occupancy(big, pi).marginals[0]; }, reps);
    r.parallel_ms = time_median_ms(
        [&] { g_sink = rfx::occupancy(big, pi).marginals[0]; }, reps);
    rows.push_back(r);
  }
  {
    // One reachability solve per (state, step) pair, so a smaller instance.
    Row r{"significance S=72 A=4 H=6"};
    r.serial_ms = time_median_ms(
        [&] { g_sink = rfx::serial::significance(mid, 0.01).reach[0]; }, reps);
    r.parallel_ms = time_median_ms(
        [&] { g_sink = rfx::significance(mid, 0.01).reach[0]; }, reps);
    rows.push_back(r);
  }

  std::printf("threads: %d\n", rfx::max_threads());
  std::printf("%-36s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms",
              "speedup");
  for (const Row& r : rows) {
    std::printf("%-36s %12.3f %12.3f %8.2fx\n", r.name.c_str(), r.serial_ms,
                r.parallel_ms, r.serial_ms / r.parallel_ms);
  }
  return 0;
}
