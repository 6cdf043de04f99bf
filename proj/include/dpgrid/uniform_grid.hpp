#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpgrid/geo.hpp"
#include "dpgrid/noise.hpp"

namespace dpgrid {

struct UGConfig {
  double c = 10.0;
  int min_m = 10;
  std::optional<int> m_override;
  CountEstimate estimate;
};

// Equi-width m x m grid of noisy counts. Immutable once built.
struct GridSynopsis {
  Rect domain;
  int m = 0;
  std::vector<double> counts;  // m*m, row-major: index = i*m + j
  double variance_per_cell = 0.0;
  double epsilon_used = 0.0;
  std::string method_tag = "ug";
  uint64_t seed = 0;
  Budget budget;

  double count_at(int i, int j) const { return counts[i * m + j]; }
  Rect cell(int i, int j) const { return cell_rect(domain, m, i, j); }
};

// Grid size m = max(min_m, round_half_up(sqrt(N*epsilon/c))). Half-up
// rounding reproduces the suggested sizes for all the reference workloads,
// including the sqrt(90) ~ 9.49 case that clamps up to 10.
int guideline_grid_size(double n_points, double epsilon, const UGConfig& cfg);

// Sizes the grid from the (exact or noisy) total, histograms the points in
// one pass, then perturbs each cell count with Laplace noise at the full
// remaining budget: cells are disjoint, so parallel composition applies.
GridSynopsis build_uniform(const PointDataset& ds, double epsilon,
                           const UGConfig& cfg, NoiseSource& src);

// Cell containing p; half-open edges, p must be inside the domain.
std::pair<int, int> cell_index(Point p, const GridSynopsis& s);

}  // namespace dpgrid
