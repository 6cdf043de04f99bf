#pragma once

#include <cstdint>
#include <random>

namespace dpgrid {

// splitmix64 step; used for seed mixing and substream derivation.
uint64_t splitmix64(uint64_t& state);

// Deterministically derives an independent stream seed from a master seed.
// Used so parallel or repeated builds draw from disjoint noise streams.
uint64_t derive_seed(uint64_t master, uint64_t stream);

// Deterministic RNG wrapper. std::mt19937_64 output is pinned by the
// standard; the conversions below avoid std::*_distribution, whose output
// is implementation-defined, so sequences are reproducible everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [a,b).
  double uniform(double a, double b) { return a + uniform01() * (b - a); }

  // Uniform on (-1/2, 1/2), both endpoints excluded.
  double uniform_centered() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
  }

  // Standard normal via Box-Muller.
  double normal();

  // Independent generator derived from this one's seed.
  Rng substream(uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace dpgrid
