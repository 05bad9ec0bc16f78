#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mayocut/discrete_solver.hpp"
#include "mayocut/measure_solver.hpp"

// Deterministic 2-d SVG output: atoms as dots scaled by mass (one color per
// set), shapes as outlines, the cut as a full-width line. Fixed-precision
// formatting keeps the text diffable.

namespace mayocut {

std::string render_svg(const Instance& inst, const std::optional<HyperplaneD>& plane);
std::string render_svg(const std::vector<ShapeSpec>& shapes,
                       const std::optional<HyperplaneD>& plane);

}  // namespace mayocut
