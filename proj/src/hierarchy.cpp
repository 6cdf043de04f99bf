#include "dpgrid/hierarchy.hpp"

#include <cmath>
#include <stdexcept>

namespace dpgrid {

namespace {

int pow_int(int base, int exp) {
  int v = 1;
  for (int k = 0; k < exp; ++k) v *= base;
  return v;
}

}  // namespace

HierSynopsis build_hierarchy(const PointDataset& ds, double epsilon,
                             const HierConfig& cfg, NoiseSource& src) {
  if (!(epsilon > 0)) {
    throw std::invalid_argument("build_hierarchy: epsilon must be positive");
  }
  if (cfg.b < 2 || cfg.d < 2) {
    throw std::invalid_argument("build_hierarchy: need b >= 2 and d >= 2");
  }
  const int stride = pow_int(cfg.b, cfg.d - 1);
  if (cfg.leaf_m <= 0 || cfg.leaf_m % stride != 0) {
    throw std::invalid_argument(
        "build_hierarchy: leaf_m must be a positive multiple of b^(d-1)");
  }

  HierSynopsis s;
  s.domain = ds.domain;
  s.b = cfg.b;
  s.d = cfg.d;
  s.leaf_m = cfg.leaf_m;
  s.epsilon_used = epsilon;
  s.seed = src.seed();
  s.budget.epsilon_total = epsilon;

  // Exact leaf histogram in one pass, then exact aggregation upward; the
  // per-level counts equal per-level histograms because the sums are integer.
  std::vector<std::vector<double>> exact(cfg.d);
  exact[cfg.d - 1].assign(
      static_cast<std::size_t>(cfg.leaf_m) * cfg.leaf_m, 0.0);
  for (const Point& p : ds.points) {
    auto [i, j] = locate_cell(s.domain, cfg.leaf_m, p);
    exact[cfg.d - 1][static_cast<std::size_t>(i) * cfg.leaf_m + j] += 1.0;
  }
  for (int k = cfg.d - 2; k >= 0; --k) {
    const int mf = cfg.leaf_m / pow_int(cfg.b, cfg.d - 2 - k);  // finer level
    const int mc = mf / cfg.b;
    exact[k].assign(static_cast<std::size_t>(mc) * mc, 0.0);
    for (int i = 0; i < mf; ++i) {
      for (int j = 0; j < mf; ++j) {
        exact[k][static_cast<std::size_t>(i / cfg.b) * mc + j / cfg.b] +=
            exact[k + 1][static_cast<std::size_t>(i) * mf + j];
      }
    }
  }

  const double eps_level = epsilon / cfg.d;
  s.levels.resize(cfg.d);
  for (int k = 0; k < cfg.d; ++k) {
    s.budget.allocate("level" + std::to_string(k + 1), eps_level);
    HierLevel& lvl = s.levels[k];
    lvl.m = cfg.leaf_m / pow_int(cfg.b, cfg.d - 1 - k);
    lvl.counts = std::move(exact[k]);
    for (double& c : lvl.counts) {
      c += laplace_sample(1.0 / eps_level, src);
    }
    lvl.variance = 2.0 / (eps_level * eps_level);
  }

  if (cfg.apply_inference) {
    return hier_inference(s);
  }
  s.refined.resize(cfg.d);
  for (int k = 0; k < cfg.d; ++k) s.refined[k] = s.levels[k].counts;
  return s;
}

HierSynopsis hier_inference(const HierSynopsis& input) {
  HierSynopsis s = input;
  const int d = s.d;
  const int b = s.b;
  const int kids = b * b;

  // Bottom-up: refine each internal node against the sum of its children.
  // Within a level all nodes share one refined variance, so scalars suffice.
  std::vector<std::vector<double>> up(d);
  std::vector<double> up_var(d);
  up[d - 1] = s.levels[d - 1].counts;
  up_var[d - 1] = s.levels[d - 1].variance;
  for (int k = d - 2; k >= 0; --k) {
    const int mc = s.levels[k].m;
    const int mf = s.levels[k + 1].m;
    const double var_z = s.levels[k].variance;
    const double var_sub = kids * up_var[k + 1];
    up[k].assign(static_cast<std::size_t>(mc) * mc, 0.0);
    for (int i = 0; i < mc; ++i) {
      for (int j = 0; j < mc; ++j) {
        double sub = 0.0;
        for (int a = 0; a < b; ++a) {
          for (int c = 0; c < b; ++c) {
            sub += up[k + 1][static_cast<std::size_t>(i * b + a) * mf +
                             (j * b + c)];
          }
        }
        const double z = s.levels[k].counts[static_cast<std::size_t>(i) * mc + j];
        up[k][static_cast<std::size_t>(i) * mc + j] =
            (var_sub * z + var_z * sub) / (var_z + var_sub);
      }
    }
    up_var[k] = var_z * var_sub / (var_z + var_sub);
  }

  // Top-down: push each node's residual equally onto its b^2 children, which
  // restores parent = sum(children) at every level.
  s.refined.assign(d, {});
  s.refined[0] = up[0];
  for (int k = 0; k < d - 1; ++k) {
    const int mc = s.levels[k].m;
    const int mf = s.levels[k + 1].m;
    s.refined[k + 1] = up[k + 1];
    for (int i = 0; i < mc; ++i) {
      for (int j = 0; j < mc; ++j) {
        double sub = 0.0;
        for (int a = 0; a < b; ++a) {
          for (int c = 0; c < b; ++c) {
            sub += up[k + 1][static_cast<std::size_t>(i * b + a) * mf +
                             (j * b + c)];
          }
        }
        const double parent =
            s.refined[k][static_cast<std::size_t>(i) * mc + j];
        const double share = (parent - sub) / kids;
        for (int a = 0; a < b; ++a) {
          for (int c = 0; c < b; ++c) {
            s.refined[k + 1][static_cast<std::size_t>(i * b + a) * mf +
                             (j * b + c)] += share;
          }
        }
      }
    }
  }
  return s;
}

double border_fraction(double total_cells, double group_cells, int dims) {
  if (!(total_cells > 0) || !(group_cells > 0)) {
    throw std::invalid_argument("border_fraction: M and b must be positive");
  }
  if (dims < 1) {
    throw std::invalid_argument("border_fraction: dims must be >= 1");
  }
  if (dims == 1) return 2.0 * group_cells / total_cells;
  if (dims == 2) return 4.0 * std::sqrt(group_cells) / std::sqrt(total_cells);
  return 2.0 * dims * std::pow(group_cells / total_cells, 1.0 / dims);
}

}  // namespace dpgrid
