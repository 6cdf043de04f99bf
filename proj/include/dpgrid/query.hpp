#pragma once

#include <cstdint>

#include "dpgrid/adaptive_grid.hpp"
#include "dpgrid/geo.hpp"
#include "dpgrid/hierarchy.hpp"
#include "dpgrid/uniform_grid.hpp"

namespace dpgrid {

struct Answer {
  double value = 0.0;
  std::int64_t cells_full = 0;     // leaf cells fully inside the query
  std::int64_t cells_partial = 0;  // leaf cells cut by the query boundary
};

// Range query over a synopsis: noisy counts of fully covered cells are
// summed; partially covered cells contribute a uniformity estimate. Queries
// are clipped to the domain; a degenerate (zero-area) query answers 0. Only
// the index range of cells the query can touch is visited.
Answer answer(const GridSynopsis& s, const Rect& q);

// Adaptive synopsis queries read only the post-inference leaves u'; a fully
// covered first-level cell contributes v', which equals its leaf sum.
Answer answer(const AdaptiveSynopsis& s, const Rect& q);

// Hierarchy queries read the post-inference leaf grid.
Answer answer(const HierSynopsis& s, const Rect& q);

}  // namespace dpgrid
