#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpgrid/geo.hpp"
#include "dpgrid/noise.hpp"

namespace dpgrid {

struct AGConfig {
  double alpha = 0.5;  // budget share of the first level, in (0,1)
  double c = 10.0;
  double c2 = 5.0;  // c/2 unless overridden
  int min_m1 = 10;
  std::optional<int> m1_override;
  CountEstimate estimate;
};

// One coarse cell of the adaptive synopsis: its level-1 noisy count v, the
// chosen sub-grid size m2, the m2 x m2 level-2 noisy leaf counts u, and the
// post-inference values v' and u'. After inference sum(u') == v' holds, so
// the leaves alone carry the queryable state.
struct AdaptiveCell {
  double v = 0.0;
  double v_variance = 0.0;
  int m2 = 1;
  std::vector<double> u;  // m2*m2, row-major
  double u_variance = 0.0;
  double v_prime = 0.0;
  std::vector<double> u_prime;

  double leaf(int a, int b) const { return u_prime[a * m2 + b]; }
};

struct AdaptiveSynopsis {
  Rect domain;
  int m1 = 0;
  std::vector<AdaptiveCell> cells;  // m1*m1, row-major
  double alpha = 0.5;
  double epsilon_used = 0.0;
  std::string method_tag = "ag";
  uint64_t seed = 0;
  Budget budget;

  const AdaptiveCell& cell(int i, int j) const { return cells[i * m1 + j]; }
  AdaptiveCell& cell(int i, int j) { return cells[i * m1 + j]; }
  Rect cell_bounds(int i, int j) const { return cell_rect(domain, m1, i, j); }
};

// First-level size m1 = max(min_m1, round_half_up(ceil(sqrt(N*eps/c))/4)).
int guideline_m1(double n_points, double epsilon, const AGConfig& cfg);

// Second-level size for one cell: ceil(sqrt(max(0,N')*epsilon_level2/c2)),
// never below 1 (1 means the cell is not split further).
int guideline_m2(double noisy_count, double epsilon_level2,
                 const AGConfig& cfg);

// Reconciles a cell's level-1 count v with its m2^2 leaf counts u.
// v' is the variance-minimizing weighted average of v and sum(u); the
// residual v' - sum(u) is then spread equally over the leaves so that
// sum(u') == v' exactly. With m2 = 1 this collapses to a two-observation
// weighted average.
std::pair<double, std::vector<double>> constrained_inference(
    const NoisyValue& v, const std::vector<NoisyValue>& u, double alpha,
    int m2);

// Noise variance of v' for given level variances; strictly below both
// Var(v) and m2^2*Var(u).
double inferred_variance(double v_variance, double u_variance, double alpha,
                         int m2);

// Two passes over the data: level-1 histogram + noise at alpha*eps, then a
// per-cell m2 x m2 histogram + noise at (1-alpha)*eps, then constrained
// inference cell by cell.
AdaptiveSynopsis build_adaptive(const PointDataset& ds, double epsilon,
                                const AGConfig& cfg, NoiseSource& src);

}  // namespace dpgrid
