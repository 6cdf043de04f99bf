#include "dpgrid/query.hpp"

#include <algorithm>
#include <cmath>

namespace dpgrid {

namespace {

// Intersection area below this fraction of a cell counts as no intersection,
// so FP slivers on shared edges do not register as partial cells.
constexpr double kSliverFraction = 1e-15;

struct IndexRange {
  int lo = 0;
  int hi = -1;  // inclusive; empty when hi < lo
};

IndexRange axis_range(double dom_lo, double dom_hi, int m, double q_lo,
                      double q_hi) {
  const double w = (dom_hi - dom_lo) / m;
  IndexRange r;
  r.lo = std::clamp(static_cast<int>(std::floor((q_lo - dom_lo) / w)), 0, m - 1);
  r.hi = std::clamp(static_cast<int>(std::ceil((q_hi - dom_lo) / w)) - 1, 0, m - 1);
  return r;
}

// Core accumulation over one equi-width grid; counts indexed i*m + j.
void answer_grid(const Rect& domain, int m, const double* counts,
                 const Rect& q, Answer& out) {
  const IndexRange ir = axis_range(domain.x0, domain.x1, m, q.x0, q.x1);
  const IndexRange jr = axis_range(domain.y0, domain.y1, m, q.y0, q.y1);
  for (int i = ir.lo; i <= ir.hi; ++i) {
    for (int j = jr.lo; j <= jr.hi; ++j) {
      const Rect cell = cell_rect(domain, m, i, j);
      const double count = counts[static_cast<std::size_t>(i) * m + j];
      if (q.contains(cell)) {
        out.value += count;
        ++out.cells_full;
        continue;
      }
      const Rect o = cell.intersect(q);
      const double area = o.width() > 0 && o.height() > 0 ? o.area() : 0.0;
      if (area < kSliverFraction * cell.area()) continue;
      out.value += count * (area / cell.area());
      ++out.cells_partial;
    }
  }
}

// Clips to the domain; returns false when nothing remains to answer.
bool clip_query(const Rect& domain, Rect& q) {
  q = domain.intersect(q);
  return q.width() > 0 && q.height() > 0;
}

}  // namespace

Answer answer(const GridSynopsis& s, const Rect& q_in) {
  Answer out;
  Rect q = q_in;
  if (!clip_query(s.domain, q)) return out;
  answer_grid(s.domain, s.m, s.counts.data(), q, out);
  return out;
}

Answer answer(const AdaptiveSynopsis& s, const Rect& q_in) {
  Answer out;
  Rect q = q_in;
  if (!clip_query(s.domain, q)) return out;
  const IndexRange ir = axis_range(s.domain.x0, s.domain.x1, s.m1, q.x0, q.x1);
  const IndexRange jr = axis_range(s.domain.y0, s.domain.y1, s.m1, q.y0, q.y1);
  for (int i = ir.lo; i <= ir.hi; ++i) {
    for (int j = jr.lo; j <= jr.hi; ++j) {
      const Rect bounds = s.cell_bounds(i, j);
      const AdaptiveCell& cell = s.cell(i, j);
      if (q.contains(bounds)) {
        // All leaves are covered and sum(u') == v'.
        out.value += cell.v_prime;
        out.cells_full += static_cast<std::int64_t>(cell.m2) * cell.m2;
        continue;
      }
      const Rect o = bounds.intersect(q);
      if (o.width() <= 0 || o.height() <= 0 ||
          o.area() < kSliverFraction * bounds.area()) {
        continue;
      }
      answer_grid(bounds, cell.m2, cell.u_prime.data(), o, out);
    }
  }
  return out;
}

Answer answer(const HierSynopsis& s, const Rect& q_in) {
  Answer out;
  Rect q = q_in;
  if (!clip_query(s.domain, q)) return out;
  answer_grid(s.domain, s.leaf_m, s.leaves().data(), q, out);
  return out;
}

}  // namespace dpgrid
