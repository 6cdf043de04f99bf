#pragma once

#include <string>
#include <vector>

#include "dpgrid/geo.hpp"
#include "dpgrid/noise.hpp"

namespace dpgrid {

struct HierConfig {
  int b = 2;        // branching per axis, >= 2
  int d = 3;        // number of levels, >= 2
  int leaf_m = 0;   // leaf grid cells per axis; must be divisible by b^(d-1)
  bool apply_inference = true;
};

// One level of the tree, viewed as an m x m grid (level k has
// leaf_m / b^(d-1-k) cells per axis; the last level is the leaf grid).
struct HierLevel {
  int m = 0;
  std::vector<double> counts;  // m*m, row-major
  double variance = 0.0;
};

struct HierSynopsis {
  Rect domain;
  int b = 0;
  int d = 0;
  int leaf_m = 0;
  std::vector<HierLevel> levels;  // coarse to fine; levels[d-1] is the leaf grid
  // Post-inference values, same shapes as `levels`; the last entry is the
  // queryable leaf grid. Without inference these mirror the noisy counts.
  std::vector<std::vector<double>> refined;
  double epsilon_used = 0.0;
  std::string method_tag = "hier";
  uint64_t seed = 0;
  Budget budget;

  const std::vector<double>& leaves() const { return refined.back(); }
};

// Builds the d-level tree over an exact leaf histogram: one pass over the
// points, exact b x b aggregation upward, then independent Laplace noise at
// every level with an equal epsilon/d share. Applies constrained inference
// unless cfg.apply_inference is off.
HierSynopsis build_hierarchy(const PointDataset& ds, double epsilon,
                             const HierConfig& cfg, NoiseSource& src);

// Constrained inference over the noisy levels. Bottom-up, each internal
// node's value is refined as the inverse-variance weighted mean of its own
// noisy count and the sum of its children's refined values; top-down, each
// node's residual against its children is spread equally over the b^2
// children. After this, every parent equals the sum of its children.
HierSynopsis hier_inference(const HierSynopsis& s);

// Fraction of the domain a query must answer from leaf cells when M base
// cells are grouped b at a time: 2b/M in one dimension, 4*sqrt(b/M) in two,
// 2*dims*(b/M)^(1/dims) in general. Quantifies how much less a hierarchy
// helps as dimensionality grows.
double border_fraction(double total_cells, double group_cells, int dims);

}  // namespace dpgrid
