#pragma once

#include <optional>
#include <string>

#include "rcm/explore.hpp"

namespace rcm {

// Figure-style rendering of a 2-D realization: cube grid, points, edges,
// filled 2-simplices, the circles of radius s and r, revealed cubes shaded,
// and the components touching the sphere of radius s drawn in blue.
// Byte-identical output for identical input.
struct RenderStyle {
  double s = 0.0;  // sphere radius (0: omit)
  double r = 0.0;  // target radius (0: omit)
  int q = 0;       // connectivity level for the blue highlighting
  double pixels_per_unit = 40.0;
};

std::string render_svg(const Complex& cx, const RenderStyle& style,
                       const ExplorationTrace* trace = nullptr);

}  // namespace rcm
