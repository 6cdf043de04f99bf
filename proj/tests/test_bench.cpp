#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "dpgrid/bench.hpp"

using namespace dpgrid;

TEST_CASE("default schedule quarters the domain at q6") {
  const Rect domain{0, 0, 64, 64};
  QuerySchedule s = default_schedule(domain);
  CHECK(s.sizes[0] == std::pair{1.0, 1.0});
  CHECK(s.sizes[5] == std::pair{32.0, 32.0});
  const double frac =
      s.sizes[5].first * s.sizes[5].second / domain.area();
  CHECK(frac == doctest::Approx(0.25));
}

TEST_CASE("schedule overrides reproduce the reference query sizes") {
  QuerySchedule road = schedule_from_q1(Rect{0, 0, 25, 20}, 0.5, 0.5);
  CHECK(road.sizes[5] == std::pair{16.0, 16.0});
  QuerySchedule checkin = schedule_from_q1(Rect{0, 0, 360, 150}, 6, 3);
  CHECK(checkin.sizes[5] == std::pair{192.0, 96.0});
  CHECK_THROWS_AS(schedule_from_q1(Rect{0, 0, 10, 10}, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("gen_queries covers the feasible placements") {
  const Rect domain{0, 0, 4, 4};
  Rng rng(1);
  SUBCASE("full-domain size has a single placement") {
    auto qs = gen_queries(domain, 4, 4, 5, rng);
    REQUIRE(qs.size() == 5);
    for (const Rect& q : qs) CHECK(q == domain);
  }
  SUBCASE("n=0 yields nothing") {
    CHECK(gen_queries(domain, 1, 1, 0, rng).empty());
  }
  SUBCASE("oversized queries are rejected") {
    CHECK_THROWS_AS(gen_queries(domain, 5, 1, 1, rng), std::invalid_argument);
  }
  SUBCASE("lower corners are uniform over the feasible strip") {
    const int n = 10000;
    auto qs = gen_queries(domain, 2, 2, n, rng);
    double mean_x = 0.0;
    for (const Rect& q : qs) {
      mean_x += q.x0;
      CHECK(domain.contains(q));
      CHECK(q.width() == doctest::Approx(2.0));
    }
    mean_x /= n;
    // Uniform on [0,2]: mean 1, sigma of the sample mean = 2/sqrt(12n).
    const double se = 2.0 / std::sqrt(12.0 * n);
    CHECK(std::fabs(mean_x - 1.0) < 3.0 * se);
  }
  SUBCASE("integer corners land on the lattice") {
    auto qs = gen_queries(domain, 2, 2, 100, rng, true);
    for (const Rect& q : qs) {
      CHECK(q.x0 == std::floor(q.x0));
      CHECK(q.y0 == std::floor(q.y0));
    }
  }
}

TEST_CASE("error metrics") {
  CHECK(relative_error(5, 5, 10) == 0.0);
  CHECK(relative_error(15, 5, 10) == doctest::Approx(1.0));
  CHECK(relative_error(2, 0, 10) == doctest::Approx(0.2));
  CHECK_THROWS_AS(relative_error(1, 1, 0), std::invalid_argument);
  CHECK(absolute_error(5, 5) == 0.0);
  CHECK(absolute_error(15, 5) == 10.0);
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const double a = rng.uniform(-100, 100), b = rng.uniform(-100, 100);
    CHECK(absolute_error(a, b) == std::fabs(a - b));
  }
}

TEST_CASE("candlestick percentiles use nearest-rank") {
  SUBCASE("single sample") {
    ErrorStats st = candlestick({7});
    CHECK(st.p25 == 7);
    CHECK(st.median == 7);
    CHECK(st.p75 == 7);
    CHECK(st.p95 == 7);
    CHECK(st.mean == 7);
  }
  SUBCASE("1..100") {
    std::vector<double> xs(100);
    for (int i = 0; i < 100; ++i) xs[i] = 100 - i;  // unsorted on purpose
    ErrorStats st = candlestick(xs);
    CHECK(st.p25 == 25);
    CHECK(st.median == 50);
    CHECK(st.p75 == 75);
    CHECK(st.p95 == 95);
    CHECK(st.mean == doctest::Approx(50.5));
  }
  SUBCASE("ordering invariant") {
    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> xs(1 + static_cast<int>(rng.uniform01() * 300));
      for (double& x : xs) x = rng.uniform(-5, 5);
      ErrorStats st = candlestick(xs);
      CHECK(st.p25 <= st.median);
      CHECK(st.median <= st.p75);
      CHECK(st.p75 <= st.p95);
    }
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(candlestick({}), std::invalid_argument);
  }
}

namespace {

PointDataset lattice_dataset() {
  // 64x64 unit cells, 4 points per cell, on a domain where integer-corner
  // queries align with a 64-cell grid.
  PointDataset ds;
  ds.domain = Rect{0, 0, 64, 64};
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      ds.points.push_back(Point{i + 0.25, j + 0.25});
      ds.points.push_back(Point{i + 0.75, j + 0.25});
      ds.points.push_back(Point{i + 0.25, j + 0.75});
      ds.points.push_back(Point{i + 0.75, j + 0.75});
    }
  }
  return ds;
}

}  // namespace

TEST_CASE("zero-noise aligned benchmark reports zero error everywhere") {
  PointDataset ds = lattice_dataset();
  BenchOptions opt;
  opt.dataset_tag = "lattice";
  UGConfig ug;
  ug.m_override = 64;
  ug.estimate.exact_n = true;
  opt.methods = {ug_method("ug", ug)};
  opt.epsilons = {1.0};
  opt.schedule = default_schedule(ds.domain);
  opt.schedule.queries_per_size = 50;
  opt.schedule.integer_corners = true;
  opt.seeds = {1, 2};
  opt.zero_noise = true;
  ExperimentReport rep = run_experiment(ds, opt);
  REQUIRE(rep.rows.size() == 2 * 6 * 2);  // seeds x sizes x kinds
  for (const ReportRow& r : rep.rows) {
    CHECK(r.stats.p25 == 0.0);
    CHECK(r.stats.p95 == 0.0);
    CHECK(r.stats.mean == 0.0);
  }
}

TEST_CASE("experiment reports are deterministic per seed set") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::uniform;
  spec.n = 2000;
  spec.domain = Rect{0, 0, 1, 1};
  PointDataset ds = gen_synthetic(spec, 500);

  BenchOptions opt;
  UGConfig ug;
  ug.estimate.exact_n = true;
  AGConfig ag;
  ag.estimate.exact_n = true;
  opt.methods = {ug_method("ug", ug), ag_method("ag", ag)};
  opt.epsilons = {0.5, 1.0};
  opt.schedule = default_schedule(ds.domain);
  opt.schedule.queries_per_size = 20;
  opt.seeds = {11, 12, 13};

  ExperimentReport a = run_experiment(ds, opt);
  ExperimentReport b = run_experiment(ds, opt);
  std::ostringstream csv_a, csv_b;
  a.write_csv(csv_a);
  b.write_csv(csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(a.rows.size() == 3u * 2 * 2 * 6 * 2);

  // Different seeds give different noise.
  opt.seeds = {99};
  ExperimentReport c = run_experiment(ds, opt);
  std::ostringstream csv_c;
  c.write_csv(csv_c);
  CHECK(csv_a.str() != csv_c.str());
}

TEST_CASE("csv rows carry the full row schema") {
  PointDataset ds = lattice_dataset();
  BenchOptions opt;
  opt.dataset_tag = "lattice";
  UGConfig ug;
  ug.m_override = 8;
  ug.estimate.exact_n = true;
  opt.methods = {ug_method("ug", ug)};
  opt.epsilons = {0.25};
  opt.schedule = default_schedule(ds.domain);
  opt.schedule.queries_per_size = 5;
  opt.seeds = {7};
  ExperimentReport rep = run_experiment(ds, opt);
  std::ostringstream csv;
  rep.write_csv(csv);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "dataset,method,epsilon,size_index,kind,p25,median,p75,p95,mean,seed");
  std::string first;
  std::getline(lines, first);
  CHECK(first.rfind("lattice,ug,0.25,1,relative,", 0) == 0);
  CHECK(first.substr(first.size() - 2) == ",7");
}
