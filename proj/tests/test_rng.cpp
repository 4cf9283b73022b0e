#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rfx/rng.hpp"

using rfx::Rng;

TEST_CASE("rng: same seed reproduces the stream bit for bit") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng: different seeds diverge") {
  Rng a(1), b(2);
  bool differs = false;
  for (int i = 0; i < 8; ++i) differs |= (a.next_u64() != b.next_u64());
  CHECK(differs);
}

TEST_CASE("rng: split depends only on the construction seed") {
  Rng fresh(77);
  Rng consumed(77);
  for (int i = 0; i < 10; ++i) consumed.next_u64();
  Rng sa = fresh.split(5), sb = consumed.split(5);
  for (int i = 0; i < 16; ++i) CHECK(sa.next_u64() == sb.next_u64());
}

TEST_CASE("rng: distinct split salts give distinct streams") {
  Rng r(9);
  Rng a = r.split(1), b = r.split(2);
  bool differs = false;
  for (int i = 0; i < 8; ++i) differs |= (a.next_u64() != b.next_u64());
  CHECK(differs);
}

TEST_CASE("rng: uniform01 lies in [0, 1) and has the right mean") {
  Rng r(42);
  const int N = 100000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    double u = r.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / N - 0.5) < 0.005);
}

TEST_CASE("rng: uniform_int covers its range roughly evenly") {
  Rng r(7);
  const int n = 7, N = 140000;
  std::array<int, 7> counts{};
  for (int i = 0; i < N; ++i) {
    int k = r.uniform_int(n);
    REQUIRE(k >= 0);
    REQUIRE(k < n);
    ++counts[k];
  }
  // Chi-square against uniform, df = 6; 22.46 is the 0.999 quantile.
  double chi2 = 0.0;
  const double expected = static_cast<double>(N) / n;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 22.46);
}

TEST_CASE("rng: categorical respects zero weights and proportions") {
  Rng r(13);
  const std::vector<double> w = {0.0, 0.3, 0.0, 0.7};
  const int N = 20000;
  std::array<int, 4> counts{};
  for (int i = 0; i < N; ++i) ++counts[r.categorical(w)];
  CHECK(counts[0] == 0);
  CHECK(counts[2] == 0);
  CHECK(std::abs(counts[1] / double(N) - 0.3) < 0.02);
  CHECK(std::abs(counts[3] / double(N) - 0.7) < 0.02);
}

TEST_CASE("rng: categorical normalizes unnormalized weights") {
  Rng r(14);
  const std::vector<double> w = {2.0, 6.0};
  const int N = 20000;
  int ones = 0;
  for (int i = 0; i < N; ++i) ones += r.categorical(w);
  CHECK(std::abs(ones / double(N) - 0.75) < 0.02);
}

TEST_CASE("rng: dirichlet rows are simplex points") {
  Rng r(21);
  std::vector<double> row(5);
  for (int trial = 0; trial < 200; ++trial) {
    r.dirichlet(0.3, row);
    double sum = 0.0;
    for (double x : row) {
      REQUIRE(x >= 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("rng: large dirichlet concentration concentrates near uniform") {
  Rng r(22);
  std::vector<double> row(4);
  for (int trial = 0; trial < 50; ++trial) {
    r.dirichlet(1e4, row);
    for (double x : row) CHECK(std::abs(x - 0.25) < 0.05);
  }
}

TEST_CASE("rng: gamma matches its mean for shapes above and below one") {
  Rng r(23);
  const int N = 200000;
  double sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < N; ++i) sum_a += r.gamma(2.5);
  for (int i = 0; i < N; ++i) sum_b += r.gamma(0.5);
  CHECK(std::abs(sum_a / N - 2.5) < 0.05);
  CHECK(std::abs(sum_b / N - 0.5) < 0.02);
}

TEST_CASE("rng: normal has mean zero and unit variance") {
  Rng r(24);
  const int N = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < N; ++i) {
    double x = r.normal();
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / N;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sumsq / N - mean * mean - 1.0) < 0.03);
}

TEST_CASE("rng: shuffle permutes and is roughly uniform over positions") {
  Rng r(25);
  const int N = 20000;
  std::array<int, 4> first_counts{};
  for (int trial = 0; trial < N; ++trial) {
    std::vector<int> v = {0, 1, 2, 3};
    r.shuffle(std::span<int>(v));
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == std::vector<int>({0, 1, 2, 3}));
    ++first_counts[v[0]];
  }
  for (int c : first_counts) CHECK(std::abs(c / double(N) - 0.25) < 0.02);
}

TEST_CASE("rng: mix_seed separates nearby seed and salt pairs") {
  CHECK(rfx::mix_seed(0, 0) != rfx::mix_seed(0, 1));
  CHECK(rfx::mix_seed(0, 1) != rfx::mix_seed(1, 0));
  CHECK(rfx::mix_seed(5, 7) == rfx::mix_seed(5, 7));
}
