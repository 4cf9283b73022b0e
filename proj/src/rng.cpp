#include "rfx/rng.hpp"

#include <cmath>
#include <numbers>

#include "rfx/errors.hpp"

namespace rfx {

namespace {

// splitmix64: used both to expand seeds into state and to mix stream salts.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + (salt << 1));
  std::uint64_t a = splitmix64(x);
  x ^= salt;
  return a ^ splitmix64(x);
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int n) {
  if (n <= 0) throw ValidationError("uniform_int: n must be positive");
  std::uint64_t un = static_cast<std::uint64_t>(n);
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

int Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw ValidationError("categorical: weights sum to zero");
  double u = uniform01() * total;
  double acc = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = static_cast<int>(i);
    acc += weights[i];
    if (u < acc && weights[i] > 0.0) return static_cast<int>(i);
  }
  // u landed in the rounding dust past the last cumulative step.
  return last_positive;
}

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw ValidationError("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost: G(a) = G(a + 1) * U^{1/a}.
    double u = 1.0 - uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = 1.0 - uniform01();  // in (0, 1]
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

void Rng::dirichlet(double concentration, std::span<double> out) {
  if (!(concentration > 0.0)) {
    throw ValidationError("dirichlet: concentration must be positive");
  }
  double total = 0.0;
  for (auto& cell : out) {
    cell = gamma(concentration);
    total += cell;
  }
  for (auto& cell : out) cell /= total;
}

}  // namespace rfx
