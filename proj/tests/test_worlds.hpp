#pragma once

// Constructed wall-with-gap worlds shared by the search/corridor/planner
// tests. Sampling mirrors the maze generator: lattices anchored at the gap
// edges, spacing h/2, wall slab centered on its nominal plane.

#include "mrplan/dual_map.hpp"
#include "mrplan/maze.hpp"
#include "mrplan/point_cloud.hpp"

namespace mrplan::testing {

struct GapSpec {
  double wall_x{2.0};
  double cy{0.0};   // snapped to the h lattice by the caller
  double cz{1.5};
  double width{0.28};
  double height{1.5};
  bool has_gap{true};
};

inline PointCloud make_walls(const Aabb& room, const std::vector<GapSpec>& walls,
                             double thickness = 0.2, double spacing = 0.05) {
  PointCloud cloud;
  for (const auto& w : walls) {
    const double gy0 = w.cy - w.width / 2, gy1 = w.cy + w.width / 2;
    const double gz0 = w.cz - w.height / 2, gz1 = w.cz + w.height / 2;
    std::vector<double> ys, zs;
    if (w.has_gap) {
      for (double y = gy0; y >= room.min.y(); y -= spacing) ys.push_back(y);
      for (double y = gy0 + spacing; y < gy1; y += spacing) ys.push_back(y);
      for (double y = gy1; y <= room.max.y(); y += spacing) ys.push_back(y);
      for (double z = gz0; z >= room.min.z(); z -= spacing) zs.push_back(z);
      for (double z = gz0 + spacing; z < gz1; z += spacing) zs.push_back(z);
      for (double z = gz1; z <= room.max.z(); z += spacing) zs.push_back(z);
    } else {
      for (double y = room.min.y(); y <= room.max.y(); y += spacing) ys.push_back(y);
      for (double z = room.min.z(); z <= room.max.z(); z += spacing) zs.push_back(z);
    }
    const int half_layers = static_cast<int>(std::floor(thickness / 2 / spacing + 1e-9));
    for (int m = -half_layers; m <= half_layers; ++m) {
      const double x = w.wall_x + m * spacing;
      for (double y : ys) {
        const bool y_in = w.has_gap && (y > gy0 && y < gy1);
        for (double z : zs) {
          const bool z_in = w.has_gap && (z > gz0 && z < gz1);
          if (y_in && z_in) continue;
          cloud.points.emplace_back(x, y, z);
        }
      }
    }
  }
  return cloud;
}

struct GapWorld {
  Aabb room;
  PointCloud cloud;
  DualResMap map;
  GapSpec gap;
};

// Single wall across the room with one rectangular gap (or none).
// The default room puts the wall mid-way with 2 m of clearance on both sides.
inline GapWorld make_gap_world(double width, double height, bool has_gap = true,
                               Aabb room = Aabb{Vec3(0, -1.5, 0), Vec3(4, 1.5, 3)},
                               double wall_x = 2.0,
                               DroneModel drone = DroneModel(0.3, 0.1)) {
  GapWorld w;
  w.room = room;
  w.gap = GapSpec{wall_x, 0.0, 1.5, width, height, has_gap};
  w.cloud = make_walls(room, {w.gap});
  w.map = DualResMap::build(w.cloud, drone, room);
  return w;
}

}  // namespace mrplan::testing
