#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "dpgrid/adaptive_grid.hpp"
#include "dpgrid/hierarchy.hpp"
#include "dpgrid/uniform_grid.hpp"

namespace dpgrid {

using AnySynopsis = std::variant<GridSynopsis, AdaptiveSynopsis, HierSynopsis>;

// Shortest decimal string that parses back to exactly the same double.
// Canonical output makes serialize -> parse -> serialize byte-stable.
std::string format_double(double v);

// Line-oriented text format, "dpgrid-synopsis v1". Counts may be negative;
// all values round-trip exactly.
void serialize_synopsis(const GridSynopsis& s, std::ostream& out);
void serialize_synopsis(const AdaptiveSynopsis& s, std::ostream& out);
void serialize_synopsis(const HierSynopsis& s, std::ostream& out);
void serialize_synopsis(const AnySynopsis& s, std::ostream& out);

std::string synopsis_to_string(const AnySynopsis& s);

AnySynopsis parse_synopsis(std::istream& in);
AnySynopsis parse_synopsis_file(const std::string& path);
void write_synopsis_file(const AnySynopsis& s, const std::string& path);

}  // namespace dpgrid
