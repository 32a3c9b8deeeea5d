#pragma once

// Top-down floor plan: room outline, doors with their clearance, windows, and
// one <rect> per placed object coloured by group. The z axis points down the
// page so the plan reads like the world seen from above.

#include "layoutforge/pipeline.hpp"

#include <string>
#include <vector>

namespace layoutforge {

struct SvgOptions {
  double pixels_per_meter = 100;
  double margin = 0.5;
  bool show_clearance = true;
  double door_clearance_scale = 1.0;
};

/// `group_of[i]` is the group of object i (ignored for unplaced objects).
std::string render_svg(const Scene& scene, const std::vector<std::size_t>& group_of,
                       const SvgOptions& options = {});

std::string render_svg(const LayoutResult& result, const SvgOptions& options = {});

}  // namespace layoutforge
