#include "dpgrid/geo.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dpgrid {

Rect cell_rect(const Rect& domain, int m, int i, int j) {
  const double w = domain.width() / m;
  const double h = domain.height() / m;
  Rect c;
  c.x0 = (i == 0) ? domain.x0 : domain.x0 + i * w;
  c.x1 = (i == m - 1) ? domain.x1 : domain.x0 + (i + 1) * w;
  c.y0 = (j == 0) ? domain.y0 : domain.y0 + j * h;
  c.y1 = (j == m - 1) ? domain.y1 : domain.y0 + (j + 1) * h;
  return c;
}

namespace {

int locate_axis(double lo, double hi, int m, double coord) {
  const double w = (hi - lo) / m;
  int i = static_cast<int>(std::floor((coord - lo) / w));
  i = std::clamp(i, 0, m - 1);
  // floor() can disagree with the half-open cell edges by one ulp; nudge the
  // index until it matches the rectangle containment used everywhere else.
  while (i + 1 < m && coord >= lo + (i + 1) * w) ++i;
  while (i > 0 && coord < lo + i * w) --i;
  return i;
}

}  // namespace

std::pair<int, int> locate_cell(const Rect& domain, int m, Point p) {
  if (!domain.contains(p)) {
    throw std::invalid_argument("locate_cell: point outside domain");
  }
  return {locate_axis(domain.x0, domain.x1, m, p.x),
          locate_axis(domain.y0, domain.y1, m, p.y)};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

// Returns false on a malformed line.
bool parse_point_line(std::string_view line, Point& out) {
  auto comma = line.find(',');
  if (comma == std::string_view::npos) return false;
  return parse_double(line.substr(0, comma), out.x) &&
         parse_double(line.substr(comma + 1), out.y);
}

Rect tight_domain(const std::vector<Point>& pts) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const Point& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  // Inflate the upper edges so points at the max coordinate satisfy the
  // half-open containment. Degenerate extents fall back to the coordinate
  // magnitude so the domain keeps positive area.
  double padx = 1e-9 * (x1 - x0);
  double pady = 1e-9 * (y1 - y0);
  if (padx <= 0) padx = 1e-9 * std::max(1.0, std::fabs(x1));
  if (pady <= 0) pady = 1e-9 * std::max(1.0, std::fabs(y1));
  return Rect{x0, y0, x1 + padx, y1 + pady};
}

}  // namespace

PointDataset load_points(std::istream& in, std::optional<Rect> domain) {
  if (domain && !domain->valid()) {
    throw std::invalid_argument("load_points: invalid domain rectangle");
  }
  PointDataset ds;
  std::string raw;
  std::size_t lineno = 0;
  bool first_data_line = true;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    Point p;
    if (!parse_point_line(line, p)) {
      // Header heuristic: skip the first line only when no field of it is
      // numeric ("x,y"); a line like "1.0,abc" is malformed, not a header.
      if (first_data_line) {
        double dummy;
        auto comma = line.find(',');
        bool any_numeric =
            parse_double(line.substr(0, comma), dummy) ||
            (comma != std::string_view::npos &&
             parse_double(line.substr(comma + 1), dummy));
        first_data_line = false;
        if (!any_numeric) continue;
      }
      throw std::runtime_error("load_points: malformed point at line " +
                               std::to_string(lineno));
    }
    first_data_line = false;
    if (domain && !domain->contains(p)) {
      throw std::runtime_error("load_points: point at line " +
                               std::to_string(lineno) +
                               " outside the explicit domain");
    }
    ds.points.push_back(p);
  }
  if (domain) {
    ds.domain = *domain;
  } else if (!ds.points.empty()) {
    ds.domain = tight_domain(ds.points);
  } else {
    throw std::runtime_error("load_points: empty input and no domain given");
  }
  return ds;
}

PointDataset load_points_file(const std::string& path,
                              std::optional<Rect> domain) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_points: cannot open " + path);
  return load_points(in, domain);
}

std::int64_t true_count(const PointDataset& ds, const Rect& q) {
  std::int64_t n = 0;
  for (const Point& p : ds.points) {
    if (q.contains(p)) ++n;
  }
  return n;
}

double uniform_estimate(double count, const Rect& cell, const Rect& q) {
  if (!(cell.area() > 0)) {
    throw std::invalid_argument("uniform_estimate: cell has no area");
  }
  if (q.contains(cell)) return count;
  const Rect o = cell.intersect(q);
  if (o.width() <= 0 || o.height() <= 0) return 0.0;
  return count * (o.area() / cell.area());
}

PointDataset gen_synthetic(const SyntheticSpec& spec, uint64_t seed) {
  if (!spec.domain.valid()) {
    throw std::invalid_argument("gen_synthetic: invalid domain");
  }
  if (spec.kind == SyntheticKind::gaussian_mixture) {
    if (spec.clusters.empty()) {
      throw std::invalid_argument("gen_synthetic: mixture needs clusters");
    }
    double wsum = 0.0;
    for (const auto& c : spec.clusters) {
      if (!(c.weight > 0)) {
        throw std::invalid_argument("gen_synthetic: cluster weight <= 0");
      }
      wsum += c.weight;
    }
    if (std::fabs(wsum - 1.0) > 1e-9) {
      throw std::invalid_argument("gen_synthetic: weights must sum to 1");
    }
  }

  PointDataset ds;
  ds.domain = spec.domain;
  ds.points.reserve(spec.n);
  Rng rng(seed);

  if (spec.kind == SyntheticKind::uniform) {
    for (std::size_t k = 0; k < spec.n; ++k) {
      ds.points.push_back(
          Point{rng.uniform(spec.domain.x0, spec.domain.x1),
                rng.uniform(spec.domain.y0, spec.domain.y1)});
    }
    return ds;
  }

  for (std::size_t k = 0; k < spec.n; ++k) {
    const double pick = rng.uniform01();
    double acc = 0.0;
    const GaussianCluster* cl = &spec.clusters.back();
    for (const auto& c : spec.clusters) {
      acc += c.weight;
      if (pick < acc) {
        cl = &c;
        break;
      }
    }
    Point p;
    int tries = 0;
    do {
      if (++tries > 1000000) {
        throw std::runtime_error(
            "gen_synthetic: cluster mass lies outside the domain");
      }
      p.x = cl->center.x + cl->stddev * rng.normal();
      p.y = cl->center.y + cl->stddev * rng.normal();
    } while (!spec.domain.contains(p));
    ds.points.push_back(p);
  }
  return ds;
}

}  // namespace dpgrid
