#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "dpgrid/adaptive_grid.hpp"

using namespace dpgrid;

TEST_CASE("guideline_m1 reproduces the reference first-level sizes") {
  AGConfig cfg;  // c = 10
  CHECK(guideline_m1(1e6, 0.1, cfg) == 25);
  CHECK(guideline_m1(1e6, 1.0, cfg) == 79);
  CHECK(guideline_m1(9e5, 1.0, cfg) == 75);
  CHECK(guideline_m1(9e5, 0.1, cfg) == 24);
  CHECK(guideline_m1(9e3, 0.1, cfg) == 10);  // clamp
}

TEST_CASE("guideline_m1 override wins") {
  AGConfig cfg;
  cfg.m1_override = 5;
  CHECK(guideline_m1(1e6, 1.0, cfg) == 5);
}

TEST_CASE("guideline_m2 ceils and floors at one") {
  AGConfig cfg;  // c2 = 5
  CHECK(guideline_m2(-3.0, 0.5, cfg) == 1);
  CHECK(guideline_m2(0.0, 0.5, cfg) == 1);
  CHECK(guideline_m2(1000.0, 0.5, cfg) == 10);  // ceil(sqrt(100))
  CHECK(guideline_m2(41.0, 0.5, cfg) == 3);     // ceil(sqrt(4.1))
}

TEST_CASE("constrained_inference leaves consistent inputs unchanged") {
  const NoisyValue v{8.0, 1.0};
  const std::vector<NoisyValue> u = {
      {2.0, 1.0}, {2.0, 1.0}, {2.0, 1.0}, {2.0, 1.0}};
  auto [v_prime, u_prime] = constrained_inference(v, u, 0.5, 2);
  CHECK(v_prime == doctest::Approx(8.0).epsilon(1e-12));
  for (double x : u_prime) CHECK(x == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("constrained_inference matches the hand-derived case") {
  // alpha=0.5, m2=2: weight on v is 0.25*4/(0.25 + 0.25*4) = 0.8.
  const NoisyValue v{10.0, 8.0};
  const std::vector<NoisyValue> u = {
      {2.0, 8.0}, {2.0, 8.0}, {2.0, 8.0}, {2.0, 8.0}};
  auto [v_prime, u_prime] = constrained_inference(v, u, 0.5, 2);
  CHECK(v_prime == doctest::Approx(9.6).epsilon(1e-12));
  for (double x : u_prime) CHECK(x == doctest::Approx(2.4).epsilon(1e-12));
}

TEST_CASE("constrained_inference with m2=1 is a two-observation average") {
  auto [v_prime, u_prime] =
      constrained_inference(NoisyValue{4.0, 8.0}, {NoisyValue{6.0, 8.0}}, 0.5, 1);
  CHECK(v_prime == doctest::Approx(5.0).epsilon(1e-12));
  REQUIRE(u_prime.size() == 1);
  CHECK(u_prime[0] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("constrained_inference rejects mismatched leaf counts") {
  CHECK_THROWS_AS(
      constrained_inference(NoisyValue{1, 1}, {NoisyValue{1, 1}}, 0.5, 2),
      std::invalid_argument);
}

TEST_CASE("sum of inferred leaves equals the inferred parent") {
  Rng rng(808);
  for (int t = 0; t < 200; ++t) {
    const int m2 = 1 + static_cast<int>(rng.uniform01() * 6);
    const double alpha = rng.uniform(0.1, 0.9);
    NoisyValue v{rng.uniform(-50, 200), 1.0};
    std::vector<NoisyValue> u(m2 * m2);
    for (auto& x : u) x = NoisyValue{rng.uniform(-20, 60), 1.0};
    auto [v_prime, u_prime] = constrained_inference(v, u, alpha, m2);
    const double sum = std::accumulate(u_prime.begin(), u_prime.end(), 0.0);
    CHECK(std::fabs(sum - v_prime) < 1e-9);
  }
}

TEST_CASE("inferred variance beats both inputs analytically") {
  // Var(v') = (a^2 m2^2)^2 Var(v)/W^2 + ((1-a)^2)^2 m2^2 Var(u)/W^2
  const double alpha = 0.5;
  const int m2 = 4;
  const double eps = 1.0;
  const double var_v = 2.0 / std::pow(alpha * eps, 2);
  const double var_u = 2.0 / std::pow((1 - alpha) * eps, 2);
  const double var_vp = inferred_variance(var_v, var_u, alpha, m2);
  CHECK(var_vp == doctest::Approx(7.529411764705882));
  CHECK(var_vp < var_v);
  CHECK(var_vp < m2 * m2 * var_u);
}

TEST_CASE("Monte Carlo: inference shrinks the noise of the cell estimate") {
  // 20 replicates of 500 trials; margins are judged against the standard
  // error of the replicate means (batch means).
  const double alpha = 0.5;
  const int m2 = 4;
  const double true_v = 100.0;
  NoiseSource src = NoiseSource::laplace(991);

  const int reps = 20, per_rep = 500;
  std::vector<double> margin_v, margin_sum;
  for (int r = 0; r < reps; ++r) {
    double ssq_v = 0, ssq_vp = 0, ssq_sum = 0;
    for (int t = 0; t < per_rep; ++t) {
      NoisyValue v{true_v + laplace_sample(1.0 / alpha, src), 0};
      std::vector<NoisyValue> u(m2 * m2);
      double sum_u = 0;
      for (auto& x : u) {
        x.value = true_v / (m2 * m2) + laplace_sample(1.0 / (1 - alpha), src);
        sum_u += x.value;
      }
      auto [v_prime, u_prime] = constrained_inference(v, u, alpha, m2);
      ssq_v += (v.value - true_v) * (v.value - true_v);
      ssq_vp += (v_prime - true_v) * (v_prime - true_v);
      ssq_sum += (sum_u - true_v) * (sum_u - true_v);
    }
    margin_v.push_back(std::sqrt(ssq_v / per_rep) - std::sqrt(ssq_vp / per_rep));
    margin_sum.push_back(std::sqrt(ssq_sum / per_rep) -
                         std::sqrt(ssq_vp / per_rep));
  }
  auto mean_se = [](const std::vector<double>& xs) {
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (xs.size() - 1);
    return std::pair{mean, std::sqrt(var / xs.size())};
  };
  auto [mv, sev] = mean_se(margin_v);
  auto [ms, ses] = mean_se(margin_sum);
  CHECK(mv > 3.0 * sev);
  CHECK(ms > 3.0 * ses);
}

namespace {

PointDataset clustered_dataset(std::size_t n, uint64_t seed) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::gaussian_mixture;
  spec.n = n;
  spec.domain = Rect{0, 0, 1, 1};
  spec.clusters = {{{0.3, 0.3}, 0.04, 0.5}, {{0.7, 0.7}, 0.04, 0.5}};
  return gen_synthetic(spec, seed);
}

}  // namespace

TEST_CASE("build_adaptive on an empty dataset collapses to single leaves") {
  PointDataset ds{{}, Rect{0, 0, 1, 1}};
  AGConfig cfg;
  cfg.estimate.exact_n = true;
  NoiseSource src = NoiseSource::zero();
  AdaptiveSynopsis s = build_adaptive(ds, 1.0, cfg, src);
  CHECK(s.m1 == 10);
  for (const AdaptiveCell& c : s.cells) {
    CHECK(c.v == 0.0);
    CHECK(c.m2 == 1);
    REQUIRE(c.u_prime.size() == 1);
    CHECK(c.u_prime[0] == 0.0);
  }
}

TEST_CASE("zero-noise build is exact and inference is the identity") {
  PointDataset ds = clustered_dataset(20000, 17);
  AGConfig cfg;
  cfg.estimate.exact_n = true;
  NoiseSource src = NoiseSource::zero();
  AdaptiveSynopsis s = build_adaptive(ds, 1.0, cfg, src);
  for (int i = 0; i < s.m1; ++i) {
    for (int j = 0; j < s.m1; ++j) {
      const AdaptiveCell& c = s.cell(i, j);
      const double level1 =
          static_cast<double>(true_count(ds, s.cell_bounds(i, j)));
      CHECK(c.v == level1);
      const double leaf_sum =
          std::accumulate(c.u.begin(), c.u.end(), 0.0);
      CHECK(leaf_sum == level1);
      CHECK(c.v_prime == doctest::Approx(level1).epsilon(1e-12));
      const double prime_sum =
          std::accumulate(c.u_prime.begin(), c.u_prime.end(), 0.0);
      CHECK(std::fabs(prime_sum - c.v_prime) < 1e-9);
    }
  }
}

TEST_CASE("noisy counts at or below c2/((1-alpha)eps) stay unsplit") {
  PointDataset ds = clustered_dataset(100000, 23);
  AGConfig cfg;
  cfg.estimate.exact_n = true;
  NoiseSource src = NoiseSource::laplace(5150);
  AdaptiveSynopsis s = build_adaptive(ds, 1.0, cfg, src);
  // With alpha=0.5, eps=1, c2=5 the split threshold is N' = 10.
  const double threshold = cfg.c2 / ((1 - cfg.alpha) * 1.0);
  bool any_split = false;
  for (const AdaptiveCell& c : s.cells) {
    if (c.v <= threshold) {
      CHECK(c.m2 == 1);
    } else {
      CHECK(c.m2 > 1);
    }
    any_split |= c.m2 > 1;
  }
  CHECK(any_split);  // the clusters are dense enough to split
}

TEST_CASE("build_adaptive spends alpha and 1-alpha of the budget") {
  PointDataset ds = clustered_dataset(5000, 3);
  AGConfig cfg;
  cfg.estimate.exact_n = true;
  NoiseSource src = NoiseSource::laplace(77);
  AdaptiveSynopsis s = build_adaptive(ds, 2.0, cfg, src);
  REQUIRE(s.budget.allocations.size() == 2);
  CHECK(s.budget.allocations[0].first == "level1");
  CHECK(s.budget.allocations[0].second == doctest::Approx(1.0));
  CHECK(s.budget.allocations[1].second == doctest::Approx(1.0));
  CHECK(s.budget.spent() == doctest::Approx(2.0));

  // Sum of inferred leaves equals v' in every cell even with real noise.
  for (const AdaptiveCell& c : s.cells) {
    const double sum = std::accumulate(c.u_prime.begin(), c.u_prime.end(), 0.0);
    CHECK(std::fabs(sum - c.v_prime) < 1e-9);
  }
}

TEST_CASE("build_adaptive validates alpha") {
  PointDataset ds{{}, Rect{0, 0, 1, 1}};
  AGConfig cfg;
  cfg.alpha = 1.0;
  NoiseSource src = NoiseSource::zero();
  CHECK_THROWS_AS(build_adaptive(ds, 1.0, cfg, src), std::invalid_argument);
}
