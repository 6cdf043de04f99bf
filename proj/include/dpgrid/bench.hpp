#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpgrid/adaptive_grid.hpp"
#include "dpgrid/geo.hpp"
#include "dpgrid/hierarchy.hpp"
#include "dpgrid/query.hpp"
#include "dpgrid/rng.hpp"
#include "dpgrid/uniform_grid.hpp"

namespace dpgrid {

// Six query sizes; each doubles the previous along both axes.
struct QuerySchedule {
  std::array<std::pair<double, double>, 6> sizes;  // (width, height)
  int queries_per_size = 200;
  // Snap query corners to the unit lattice anchored at the domain corner.
  // With integer sizes and a matching grid this makes every query align to
  // cell boundaries, so zero-noise answers are exact.
  bool integer_corners = false;
};

// q1 = domain/64 per axis, doubling up to q6 = domain/2 (area fraction 1/4).
QuerySchedule default_schedule(const Rect& domain);

// Schedule starting from an explicit q1; q6 = 32*q1 must fit in the domain.
QuerySchedule schedule_from_q1(const Rect& domain, double w1, double h1);

// n rectangles of the given size, lower corners uniform over the placements
// that keep the rectangle inside the domain.
std::vector<Rect> gen_queries(const Rect& domain, double w, double h, int n,
                              Rng& rng, bool integer_corners = false);

// |answer - truth| / max(truth, rho).
double relative_error(double answer, double truth, double rho);

double absolute_error(double answer, double truth);

// Candlestick summary: nearest-rank percentiles plus the arithmetic mean.
struct ErrorStats {
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
  double p95 = 0.0;
  double mean = 0.0;
};

ErrorStats candlestick(const std::vector<double>& samples);

enum class MethodKind { uniform_grid, adaptive_grid, hierarchy };

struct MethodSpec {
  std::string tag;
  MethodKind kind = MethodKind::uniform_grid;
  UGConfig ug;
  AGConfig ag;
  HierConfig hier;
};

inline MethodSpec ug_method(std::string tag, UGConfig cfg = {}) {
  MethodSpec m;
  m.tag = std::move(tag);
  m.kind = MethodKind::uniform_grid;
  m.ug = cfg;
  return m;
}
inline MethodSpec ag_method(std::string tag, AGConfig cfg = {}) {
  MethodSpec m;
  m.tag = std::move(tag);
  m.kind = MethodKind::adaptive_grid;
  m.ag = cfg;
  return m;
}
inline MethodSpec hier_method(std::string tag, HierConfig cfg) {
  MethodSpec m;
  m.tag = std::move(tag);
  m.kind = MethodKind::hierarchy;
  m.hier = cfg;
  return m;
}

struct ReportRow {
  std::string dataset;
  std::string method;
  double epsilon = 0.0;
  int size_index = 0;  // 1..6
  std::string kind;    // "relative" | "absolute"
  ErrorStats stats;
  uint64_t seed = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;

  // dataset,method,epsilon,size_index,kind,p25,median,p75,p95,mean,seed
  void write_csv(std::ostream& out) const;
};

struct BenchOptions {
  std::string dataset_tag = "data";
  std::vector<MethodSpec> methods;
  std::vector<double> epsilons;
  QuerySchedule schedule;
  std::vector<uint64_t> seeds;
  // 0 means the default rho = 0.001*N (1.0 when the dataset is empty).
  double rho = 0.0;
  bool zero_noise = false;
};

// For every (method, epsilon, seed) builds one synopsis, answers all
// scheduled queries against it, and reduces both error kinds per query size
// to candlestick rows. The query workload depends only on (seed, size), so
// all methods and epsilons of a trial face identical queries.
ExperimentReport run_experiment(const PointDataset& ds,
                                const BenchOptions& opt);

}  // namespace dpgrid
