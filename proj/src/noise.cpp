#include "dpgrid/noise.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpgrid {

void Budget::allocate(std::string label, double epsilon_part) {
  if (!(epsilon_part > 0)) {
    throw std::invalid_argument("Budget: allocation must be positive");
  }
  if (spent() + epsilon_part > epsilon_total * (1.0 + 1e-12)) {
    throw std::invalid_argument("Budget: allocation exceeds epsilon_total");
  }
  allocations.emplace_back(std::move(label), epsilon_part);
}

double Budget::spent() const {
  double s = 0.0;
  for (const auto& [label, eps] : allocations) s += eps;
  return s;
}

Budget split_budget(double epsilon_total,
                    const std::vector<double>& fractions) {
  if (!(epsilon_total > 0)) {
    throw std::invalid_argument("split_budget: epsilon_total must be positive");
  }
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f > 0)) {
      throw std::invalid_argument("split_budget: fraction <= 0");
    }
    sum += f;
  }
  if (sum > 1.0 + 1e-12) {
    throw std::invalid_argument("split_budget: fractions exceed the budget");
  }
  Budget b;
  b.epsilon_total = epsilon_total;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    b.allocations.emplace_back("part" + std::to_string(i + 1),
                               fractions[i] * epsilon_total);
  }
  return b;
}

double NoiseSource::draw(double beta) {
  if (!(beta > 0)) {
    throw std::invalid_argument("laplace_sample: beta must be positive");
  }
  if (zero_) return 0.0;
  const double u = rng_.uniform_centered();
  const double sign = u < 0 ? -1.0 : 1.0;
  return beta * sign * std::log(1.0 - 2.0 * std::fabs(u));
}

double laplace_sample(double beta, NoiseSource& src) {
  return src.draw(beta);
}

NoisyValue noisy_count(double true_value, double epsilon_part,
                       NoiseSource& src) {
  if (!(epsilon_part > 0)) {
    throw std::invalid_argument("noisy_count: epsilon_part must be positive");
  }
  NoisyValue out;
  out.value = true_value + laplace_sample(1.0 / epsilon_part, src);
  out.variance = 2.0 / (epsilon_part * epsilon_part);
  return out;
}

NoisyValue estimate_total(const PointDataset& ds, double epsilon_est,
                          NoiseSource& src) {
  return noisy_count(static_cast<double>(ds.size()), epsilon_est, src);
}

}  // namespace dpgrid
