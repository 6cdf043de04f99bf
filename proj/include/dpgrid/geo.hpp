#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpgrid/rng.hpp"

namespace dpgrid {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle with half-open semantics: [x0,x1) x [y0,y1).
// Half-open edges make grid partitions exact: a point on a shared cell
// boundary belongs to exactly one cell.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool valid() const { return x0 < x1 && y0 < y1; }

  bool contains(Point p) const {
    return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
  }
  bool contains(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
  }
  // Intersection; may be empty (non-positive width/height).
  Rect intersect(const Rect& r) const {
    return Rect{std::max(x0, r.x0), std::max(y0, r.y0), std::min(x1, r.x1),
                std::min(y1, r.y1)};
  }
  bool operator==(const Rect&) const = default;
};

struct PointDataset {
  std::vector<Point> points;
  Rect domain;

  std::size_t size() const { return points.size(); }
};

enum class SyntheticKind { uniform, gaussian_mixture };

struct GaussianCluster {
  Point center;
  double stddev = 0.0;
  double weight = 0.0;
};

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::uniform;
  std::size_t n = 0;
  std::vector<GaussianCluster> clusters;  // gaussian_mixture only
  Rect domain;
};

// Equi-width grid helpers shared by all synopsis builders and the query
// engine. Cell (i,j) of an m x m grid over `domain` covers
// [x0+i*w, x0+(i+1)*w) x [y0+j*h, y0+(j+1)*h); the outermost edges are
// pinned to the domain boundary so the cells tile it exactly.
Rect cell_rect(const Rect& domain, int m, int i, int j);

// Cell containing p, consistent with cell_rect containment even when p sits
// exactly on a representable cell edge.
std::pair<int, int> locate_cell(const Rect& domain, int m, Point p);

// Parses "x,y" lines. A single leading header line is skipped when none of
// its fields parse as a number. If `domain` is given, points outside it are
// an error; otherwise the domain is the tight bounding box with the upper
// edges inflated by a relative 1e-9 so max-coordinate points stay inside the
// half-open domain.
PointDataset load_points(std::istream& in,
                         std::optional<Rect> domain = std::nullopt);
PointDataset load_points_file(const std::string& path,
                              std::optional<Rect> domain = std::nullopt);

// Exact number of dataset points inside q (half-open). The accuracy oracle.
std::int64_t true_count(const PointDataset& ds, const Rect& q);

// Estimated points of a cell with `count` points falling inside q, assuming
// points are spread uniformly over the cell: count * area(cell ∩ q)/area(cell).
double uniform_estimate(double count, const Rect& cell, const Rect& q);

// Deterministic per (spec, seed). Mixture samples are redrawn from their
// cluster until they land inside the domain.
PointDataset gen_synthetic(const SyntheticSpec& spec, uint64_t seed);

}  // namespace dpgrid
