#include "dpgrid/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <variant>

#include "dpgrid/synopsis_io.hpp"

namespace dpgrid {

QuerySchedule default_schedule(const Rect& domain) {
  return schedule_from_q1(domain, domain.width() / 64.0,
                          domain.height() / 64.0);
}

QuerySchedule schedule_from_q1(const Rect& domain, double w1, double h1) {
  if (!(w1 > 0) || !(h1 > 0)) {
    throw std::invalid_argument("schedule_from_q1: q1 must have positive size");
  }
  QuerySchedule sched;
  double w = w1, h = h1;
  for (auto& size : sched.sizes) {
    size = {w, h};
    w *= 2.0;
    h *= 2.0;
  }
  const auto [w6, h6] = sched.sizes.back();
  if (w6 > domain.width() || h6 > domain.height()) {
    throw std::invalid_argument("schedule_from_q1: q6 does not fit the domain");
  }
  return sched;
}

std::vector<Rect> gen_queries(const Rect& domain, double w, double h, int n,
                              Rng& rng, bool integer_corners) {
  if (w > domain.width() || h > domain.height()) {
    throw std::invalid_argument("gen_queries: query size exceeds the domain");
  }
  std::vector<Rect> out;
  out.reserve(n);
  const double span_x = domain.width() - w;
  const double span_y = domain.height() - h;
  for (int k = 0; k < n; ++k) {
    double ox, oy;
    if (integer_corners) {
      // Uniform over the integer corner offsets that keep the query inside.
      ox = std::floor(rng.uniform01() * (std::floor(span_x) + 1.0));
      oy = std::floor(rng.uniform01() * (std::floor(span_y) + 1.0));
    } else {
      ox = rng.uniform01() * span_x;
      oy = rng.uniform01() * span_y;
    }
    out.push_back(Rect{domain.x0 + ox, domain.y0 + oy, domain.x0 + ox + w,
                       domain.y0 + oy + h});
  }
  return out;
}

double relative_error(double answer, double truth, double rho) {
  if (!(rho > 0)) {
    throw std::invalid_argument("relative_error: rho must be positive");
  }
  return std::fabs(answer - truth) / std::max(truth, rho);
}

double absolute_error(double answer, double truth) {
  return std::fabs(answer - truth);
}

namespace {

// Nearest-rank percentile with the rank computed in integer arithmetic;
// ceil(p*n) in floating point misranks p95 on round counts.
double nearest_rank(const std::vector<double>& sorted, int num, int den) {
  const std::size_t n = sorted.size();
  std::size_t rank = (n * static_cast<std::size_t>(num) + den - 1) / den;
  if (rank < 1) rank = 1;
  return sorted[rank - 1];
}

}  // namespace

ErrorStats candlestick(const std::vector<double>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("candlestick: no samples");
  }
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  ErrorStats st;
  st.p25 = nearest_rank(sorted, 25, 100);
  st.median = nearest_rank(sorted, 50, 100);
  st.p75 = nearest_rank(sorted, 75, 100);
  st.p95 = nearest_rank(sorted, 95, 100);
  double sum = 0.0;
  for (double v : samples) sum += v;
  st.mean = sum / static_cast<double>(samples.size());
  return st;
}

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "dataset,method,epsilon,size_index,kind,p25,median,p75,p95,mean,seed\n";
  for (const ReportRow& r : rows) {
    out << r.dataset << ',' << r.method << ',' << format_double(r.epsilon)
        << ',' << r.size_index << ',' << r.kind << ','
        << format_double(r.stats.p25) << ',' << format_double(r.stats.median)
        << ',' << format_double(r.stats.p75) << ','
        << format_double(r.stats.p95) << ',' << format_double(r.stats.mean)
        << ',' << r.seed << '\n';
  }
}

namespace {

using Synopsis = std::variant<GridSynopsis, AdaptiveSynopsis, HierSynopsis>;

Synopsis build_one(const PointDataset& ds, const MethodSpec& spec,
                   double epsilon, NoiseSource& src) {
  switch (spec.kind) {
    case MethodKind::uniform_grid:
      return build_uniform(ds, epsilon, spec.ug, src);
    case MethodKind::adaptive_grid:
      return build_adaptive(ds, epsilon, spec.ag, src);
    case MethodKind::hierarchy:
      return build_hierarchy(ds, epsilon, spec.hier, src);
  }
  throw std::logic_error("build_one: unknown method kind");
}

}  // namespace

ExperimentReport run_experiment(const PointDataset& ds,
                                const BenchOptions& opt) {
  if (opt.methods.empty() || opt.epsilons.empty() || opt.seeds.empty()) {
    throw std::invalid_argument(
        "run_experiment: methods, epsilons and seeds must be non-empty");
  }
  // rho is an evaluation constant computed from the true size, not from any
  // private estimate.
  double rho = opt.rho;
  if (!(rho > 0)) {
    rho = ds.size() > 0 ? 0.001 * static_cast<double>(ds.size()) : 1.0;
  }

  ExperimentReport report;
  const int qps = opt.schedule.queries_per_size;
  const std::size_t n_methods = opt.methods.size();
  const std::size_t n_eps = opt.epsilons.size();

  for (uint64_t seed : opt.seeds) {
    // One synopsis per (method, epsilon), each on its own noise stream.
    std::vector<Synopsis> synopses;
    synopses.reserve(n_methods * n_eps);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      for (std::size_t ei = 0; ei < n_eps; ++ei) {
        NoiseSource src =
            opt.zero_noise
                ? NoiseSource::zero()
                : NoiseSource::laplace(
                      derive_seed(seed, 1000 + mi * n_eps + ei));
        synopses.push_back(
            build_one(ds, opt.methods[mi], opt.epsilons[ei], src));
      }
    }

    // rel_samples[(mi*n_eps+ei)][size][query], likewise abs_samples.
    std::vector<std::array<std::vector<double>, 6>> rel(n_methods * n_eps);
    std::vector<std::array<std::vector<double>, 6>> abs(n_methods * n_eps);

    for (int size_idx = 0; size_idx < 6; ++size_idx) {
      const auto [w, h] = opt.schedule.sizes[size_idx];
      Rng qrng(derive_seed(seed, 2000 + size_idx));
      const std::vector<Rect> queries = gen_queries(
          ds.domain, w, h, qps, qrng, opt.schedule.integer_corners);
      std::vector<double> truths(queries.size());
      for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        truths[qi] = static_cast<double>(true_count(ds, queries[qi]));
      }
      for (std::size_t si = 0; si < synopses.size(); ++si) {
        auto& rel_bucket = rel[si][size_idx];
        auto& abs_bucket = abs[si][size_idx];
        rel_bucket.reserve(queries.size());
        abs_bucket.reserve(queries.size());
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
          const Answer a = std::visit(
              [&](const auto& syn) { return answer(syn, queries[qi]); },
              synopses[si]);
          rel_bucket.push_back(relative_error(a.value, truths[qi], rho));
          abs_bucket.push_back(absolute_error(a.value, truths[qi]));
        }
      }
    }

    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      for (std::size_t ei = 0; ei < n_eps; ++ei) {
        const std::size_t si = mi * n_eps + ei;
        for (int size_idx = 0; size_idx < 6; ++size_idx) {
          for (const char* kind : {"relative", "absolute"}) {
            const auto& samples = kind == std::string("relative")
                                      ? rel[si][size_idx]
                                      : abs[si][size_idx];
            ReportRow row;
            row.dataset = opt.dataset_tag;
            row.method = opt.methods[mi].tag;
            row.epsilon = opt.epsilons[ei];
            row.size_index = size_idx + 1;
            row.kind = kind;
            row.stats = candlestick(samples);
            row.seed = seed;
            report.rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return report;
}

}  // namespace dpgrid
