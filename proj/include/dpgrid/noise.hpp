#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpgrid/geo.hpp"
#include "dpgrid/rng.hpp"

namespace dpgrid {

// Real value plus the variance of the noise it carries. A single Laplace
// draw with scale beta has variance 2*beta^2.
struct NoisyValue {
  double value = 0.0;
  double variance = 0.0;
};

// Ledger of epsilon spent by a build. Allocations compose sequentially and
// may never exceed the total.
struct Budget {
  double epsilon_total = 0.0;
  std::vector<std::pair<std::string, double>> allocations;

  void allocate(std::string label, double epsilon_part);
  double spent() const;
};

// parts[i] = fractions[i] * epsilon_total; fractions must be positive and
// sum to at most 1.
Budget split_budget(double epsilon_total, const std::vector<double>& fractions);

// Noise source injected into every builder. The zero kind returns 0 from
// every draw, which makes a whole pipeline equal its noiseless value; the
// laplace kind is deterministic per seed.
class NoiseSource {
 public:
  static NoiseSource laplace(uint64_t seed) { return NoiseSource(false, seed); }
  static NoiseSource zero() { return NoiseSource(true, 0); }

  // Independent source derived from this one's seed; zero stays zero.
  NoiseSource stream(uint64_t index) const {
    return NoiseSource(zero_, derive_seed(seed_, index));
  }

  bool is_zero() const { return zero_; }
  uint64_t seed() const { return seed_; }

  double draw(double beta);

 private:
  NoiseSource(bool zero, uint64_t seed) : zero_(zero), seed_(seed), rng_(seed) {}

  bool zero_;
  uint64_t seed_;
  Rng rng_;
};

// One Laplace(scale=beta) draw via inverse CDF: beta*sign(u)*ln(1-2|u|)
// with u uniform on (-1/2, 1/2). Zero sources return 0.
double laplace_sample(double beta, NoiseSource& src);

// Count query with sensitivity 1: value + Lap(1/epsilon_part),
// variance 2/epsilon_part^2. Negative outputs are kept; clamping would bias
// the estimate and downstream inference assumes unbiased inputs.
NoisyValue noisy_count(double true_value, double epsilon_part,
                       NoiseSource& src);

// Noisy estimate of the dataset size N.
NoisyValue estimate_total(const PointDataset& ds, double epsilon_est,
                          NoiseSource& src);

// Floor-at-zero view of an estimate, for grid sizing only; the raw noisy
// value stays available on the NoisyValue itself.
inline double sizing_count(const NoisyValue& v) {
  return v.value > 0 ? v.value : 0.0;
}

// How the builders obtain N for the sizing guidelines: either spend
// estimate_fraction of the budget on a noisy estimate, or use the exact N
// and spend nothing (for reproducing suggested-size tables).
struct CountEstimate {
  bool exact_n = false;
  double estimate_fraction = 0.02;
};

}  // namespace dpgrid
