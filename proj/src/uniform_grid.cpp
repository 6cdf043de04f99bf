#include "dpgrid/uniform_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dpgrid {

int guideline_grid_size(double n_points, double epsilon,
                        const UGConfig& cfg) {
  if (cfg.m_override) return *cfg.m_override;
  if (!(epsilon > 0)) {
    throw std::invalid_argument("guideline_grid_size: epsilon must be positive");
  }
  const double n = std::max(0.0, n_points);
  const double raw = std::sqrt(n * epsilon / cfg.c);
  const int m = static_cast<int>(std::floor(raw + 0.5));
  return std::max(cfg.min_m, m);
}

GridSynopsis build_uniform(const PointDataset& ds, double epsilon,
                           const UGConfig& cfg, NoiseSource& src) {
  if (!(epsilon > 0)) {
    throw std::invalid_argument("build_uniform: epsilon must be positive");
  }
  GridSynopsis s;
  s.domain = ds.domain;
  s.epsilon_used = epsilon;
  s.seed = src.seed();
  s.budget.epsilon_total = epsilon;

  double n_for_sizing = static_cast<double>(ds.size());
  double epsilon_cells = epsilon;
  if (!cfg.estimate.exact_n) {
    if (!(cfg.estimate.estimate_fraction > 0) ||
        !(cfg.estimate.estimate_fraction < 1)) {
      throw std::invalid_argument(
          "build_uniform: estimate_fraction must be in (0,1)");
    }
    const double eps_est = cfg.estimate.estimate_fraction * epsilon;
    NoisyValue est = estimate_total(ds, eps_est, src);
    s.budget.allocate("estimate", eps_est);
    n_for_sizing = sizing_count(est);
    epsilon_cells = epsilon - eps_est;
  }
  // Sizing uses the full epsilon; only the per-cell noise pays for the
  // estimate.
  s.m = guideline_grid_size(n_for_sizing, epsilon, cfg);
  s.budget.allocate("cells", epsilon_cells);

  s.counts.assign(static_cast<std::size_t>(s.m) * s.m, 0.0);
  for (const Point& p : ds.points) {
    auto [i, j] = locate_cell(s.domain, s.m, p);
    s.counts[static_cast<std::size_t>(i) * s.m + j] += 1.0;
  }
  for (double& c : s.counts) {
    c += laplace_sample(1.0 / epsilon_cells, src);
  }
  s.variance_per_cell = 2.0 / (epsilon_cells * epsilon_cells);
  return s;
}

std::pair<int, int> cell_index(Point p, const GridSynopsis& s) {
  return locate_cell(s.domain, s.m, p);
}

}  // namespace dpgrid
