#ifndef RFX_RNG_HPP
#define RFX_RNG_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace rfx {

// Deterministically combines a seed with a stream index.  Used to carve
// independent substreams out of one master seed (per episode, per goal,
// per trial) so that parallel work is reproducible regardless of
// scheduling: stream i is always Rng(mix_seed(master, i)).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Small self-contained generator (xoshiro256++ seeded via splitmix64).
// We avoid std::*_distribution on purpose: their outputs differ across
// standard library implementations, and the file formats and tests here
// rely on bit-identical streams for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // A fresh generator derived from this one's construction seed and a salt.
  // Independent of how much this generator has already been consumed.
  Rng split(std::uint64_t salt) const { return Rng(mix_seed(seed_, salt)); }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Uniform integer in {0, ..., n-1}; n >= 1.  Rejection sampling, unbiased.
  int uniform_int(int n);

  // Index sampled proportionally to the (nonnegative) weights.  Weights need
  // not be normalized; a cumulative scan keeps this exact for simplex rows
  // that carry float dust.  At least one weight must be positive.
  int categorical(std::span<const double> weights);

  // Standard normal via Box-Muller (the sine mate is discarded so the
  // stream position does not depend on call history).
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang, with the boost trick for shape < 1.
  double gamma(double shape);

  // Symmetric Dirichlet row of the given size written into out.
  void dirichlet(double concentration, std::span<double> out);

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
      int j = uniform_int(i + 1);
      std::swap(items[i], items[static_cast<std::size_t>(j)]);
    }
  }

 private:
  std::uint64_t seed_;  // construction seed, kept for split()
  std::uint64_t s_[4];  // xoshiro256++ state
};

}  // namespace rfx

#endif  // RFX_RNG_HPP
