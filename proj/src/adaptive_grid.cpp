#include "dpgrid/adaptive_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace dpgrid {

int guideline_m1(double n_points, double epsilon, const AGConfig& cfg) {
  if (cfg.m1_override) return *cfg.m1_override;
  if (!(epsilon > 0)) {
    throw std::invalid_argument("guideline_m1: epsilon must be positive");
  }
  const double n = std::max(0.0, n_points);
  const double quarter = std::ceil(std::sqrt(n * epsilon / cfg.c)) / 4.0;
  const int m1 = static_cast<int>(std::floor(quarter + 0.5));
  return std::max(cfg.min_m1, m1);
}

int guideline_m2(double noisy_count, double epsilon_level2,
                 const AGConfig& cfg) {
  if (!(epsilon_level2 > 0)) {
    throw std::invalid_argument("guideline_m2: epsilon must be positive");
  }
  const double n = std::max(0.0, noisy_count);
  const int m2 =
      static_cast<int>(std::ceil(std::sqrt(n * epsilon_level2 / cfg.c2)));
  return std::max(1, m2);
}

std::pair<double, std::vector<double>> constrained_inference(
    const NoisyValue& v, const std::vector<NoisyValue>& u, double alpha,
    int m2) {
  const std::size_t leaves = static_cast<std::size_t>(m2) * m2;
  if (u.size() != leaves) {
    throw std::invalid_argument("constrained_inference: expected m2^2 leaves");
  }
  double sum_u = 0.0;
  for (const NoisyValue& x : u) sum_u += x.value;

  const double a2m2 = alpha * alpha * m2 * m2;
  const double b2 = (1.0 - alpha) * (1.0 - alpha);
  const double w = b2 + a2m2;
  const double v_prime = (a2m2 * v.value + b2 * sum_u) / w;

  // The residual is distributed equally over the m2^2 leaves, which is what
  // makes sum(u') == v' hold exactly.
  const double share = (v_prime - sum_u) / static_cast<double>(leaves);
  std::vector<double> u_prime(leaves);
  for (std::size_t k = 0; k < leaves; ++k) {
    u_prime[k] = u[k].value + share;
  }
  return {v_prime, std::move(u_prime)};
}

double inferred_variance(double v_variance, double u_variance, double alpha,
                         int m2) {
  const double a2m2 = alpha * alpha * m2 * m2;
  const double b2 = (1.0 - alpha) * (1.0 - alpha);
  const double w = b2 + a2m2;
  const double sum_u_variance = m2 * m2 * u_variance;
  return (a2m2 / w) * (a2m2 / w) * v_variance +
         (b2 / w) * (b2 / w) * sum_u_variance;
}

AdaptiveSynopsis build_adaptive(const PointDataset& ds, double epsilon,
                                const AGConfig& cfg, NoiseSource& src) {
  if (!(epsilon > 0)) {
    throw std::invalid_argument("build_adaptive: epsilon must be positive");
  }
  if (!(cfg.alpha > 0) || !(cfg.alpha < 1)) {
    throw std::invalid_argument("build_adaptive: alpha must be in (0,1)");
  }
  AdaptiveSynopsis s;
  s.domain = ds.domain;
  s.alpha = cfg.alpha;
  s.epsilon_used = epsilon;
  s.seed = src.seed();
  s.budget.epsilon_total = epsilon;

  double n_for_sizing = static_cast<double>(ds.size());
  double epsilon_levels = epsilon;
  if (!cfg.estimate.exact_n) {
    if (!(cfg.estimate.estimate_fraction > 0) ||
        !(cfg.estimate.estimate_fraction < 1)) {
      throw std::invalid_argument(
          "build_adaptive: estimate_fraction must be in (0,1)");
    }
    const double eps_est = cfg.estimate.estimate_fraction * epsilon;
    NoisyValue est = estimate_total(ds, eps_est, src);
    s.budget.allocate("estimate", eps_est);
    n_for_sizing = sizing_count(est);
    epsilon_levels = epsilon - eps_est;
  }
  s.m1 = guideline_m1(n_for_sizing, epsilon, cfg);

  const double eps1 = cfg.alpha * epsilon_levels;
  const double eps2 = (1.0 - cfg.alpha) * epsilon_levels;
  s.budget.allocate("level1", eps1);
  s.budget.allocate("level2", eps2);

  // Pass 1: level-1 histogram.
  const std::size_t n1 = static_cast<std::size_t>(s.m1) * s.m1;
  std::vector<double> hist1(n1, 0.0);
  for (const Point& p : ds.points) {
    auto [i, j] = locate_cell(s.domain, s.m1, p);
    hist1[static_cast<std::size_t>(i) * s.m1 + j] += 1.0;
  }

  s.cells.resize(n1);
  const double v_variance = 2.0 / (eps1 * eps1);
  const double u_variance = 2.0 / (eps2 * eps2);
  for (std::size_t k = 0; k < n1; ++k) {
    AdaptiveCell& cell = s.cells[k];
    cell.v = hist1[k] + laplace_sample(1.0 / eps1, src);
    cell.v_variance = v_variance;
    cell.m2 = guideline_m2(cell.v, eps2, cfg);
    cell.u.assign(static_cast<std::size_t>(cell.m2) * cell.m2, 0.0);
    cell.u_variance = u_variance;
  }

  // Pass 2: per-cell leaf histograms.
  for (const Point& p : ds.points) {
    auto [i, j] = locate_cell(s.domain, s.m1, p);
    AdaptiveCell& cell = s.cell(i, j);
    auto [a, b] = locate_cell(s.cell_bounds(i, j), cell.m2, p);
    cell.u[static_cast<std::size_t>(a) * cell.m2 + b] += 1.0;
  }

  for (AdaptiveCell& cell : s.cells) {
    std::vector<NoisyValue> u(cell.u.size());
    for (std::size_t k = 0; k < cell.u.size(); ++k) {
      cell.u[k] += laplace_sample(1.0 / eps2, src);
      u[k] = NoisyValue{cell.u[k], u_variance};
    }
    auto [v_prime, u_prime] = constrained_inference(
        NoisyValue{cell.v, v_variance}, u, cfg.alpha, cell.m2);
    cell.v_prime = v_prime;
    cell.u_prime = std::move(u_prime);
  }
  return s;
}

}  // namespace dpgrid
