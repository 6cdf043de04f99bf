#include "dpgrid/rng.hpp"

#include <cmath>

namespace dpgrid {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t s = master;
  (void)splitmix64(s);
  s ^= 0x5851f42d4c957f2dULL * (stream + 1);
  uint64_t out = splitmix64(s);
  (void)splitmix64(s);
  return out ^ splitmix64(s);
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller on (0,1) uniforms; u1 must stay away from 0 for the log.
  double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

}  // namespace dpgrid
