#pragma once

#include <cstdint>
#include <vector>

#include "mrplan/geometry.hpp"
#include "mrplan/point_cloud.hpp"

namespace mrplan {

// One family of gap sizes a wall may draw from.
struct GapClass {
  double width_min{0.24};
  double width_max{0.30};
  double height_min{1.3};
  double height_max{1.7};
  double weight{1.0};
};

// Synthetic benchmark room: `wall_count` solid walls perpendicular to the
// x axis, each with exactly one rectangular gap at a seeded position.
// Gap centers are snapped to the sampling lattice (cell size `snap`) so the
// benchmark difficulty is controlled by gap width, not by aliasing luck.
struct MazeConfig {
  Aabb room{Vec3(0.0, -3.0, 0.0), Vec3(10.0, 3.0, 3.0)};
  int wall_count{1};
  double wall_thickness{0.2};
  double first_wall_x{3.0};
  double wall_spacing{3.5};
  double point_spacing{0.05};  // <= h/2 so gaps are not aliased away
  double snap{0.1};            // HRM cell size
  double gap_margin{0.5};      // keep gaps away from room faces
  std::vector<GapClass> gaps{GapClass{}};
};

// Deterministic in (cfg, seed).
PointCloud generate_maze(const MazeConfig& cfg, std::uint64_t seed);

// Gap rectangles actually drawn for (cfg, seed); used by tests.
struct GapInfo {
  double wall_x;      // wall mid-plane
  double cy, cz;      // gap center (snapped)
  double width, height;
};
std::vector<GapInfo> maze_gaps(const MazeConfig& cfg, std::uint64_t seed);

}  // namespace mrplan
