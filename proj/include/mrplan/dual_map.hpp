#pragma once

#include "mrplan/geometry.hpp"
#include "mrplan/point_cloud.hpp"
#include "mrplan/voxel_grid.hpp"

namespace mrplan {

// Paired configuration-space maps. The low-resolution map (cell size r) is
// inflated by the sphere radius r: its free space is safe at any attitude.
// The high-resolution map (cell size h) is inflated by h/2 only, so it keeps
// narrow candidate passages open; whether a candidate is actually flyable is
// decided by the SE(3) optimization and the validator downstream.
// hrm_raw is the plain un-inflated occupancy used for corridor seeding.
struct DualResMap {
  VoxelGrid lrm;
  VoxelGrid hrm;
  VoxelGrid hrm_raw;
  DroneModel drone;

  static DualResMap build(const PointCloud& cloud, const DroneModel& drone,
                          const Aabb& bounds) {
    DualResMap m;
    m.drone = drone;
    m.lrm = build_cspace_grid(cloud, drone.r, drone.r, bounds);
    m.hrm = build_cspace_grid(cloud, drone.h, 0.5 * drone.h, bounds);
    m.hrm_raw = build_voxel_grid(cloud, drone.h, bounds);
    return m;
  }

  // New map version accumulating additional sensed points.
  DualResMap extended(const PointCloud& new_points) const {
    DualResMap m;
    m.drone = drone;
    m.lrm = add_points_cspace(lrm, new_points, drone.r);
    m.hrm = add_points_cspace(hrm, new_points, 0.5 * drone.h);
    m.hrm_raw = add_points_raw(hrm_raw, new_points);
    return m;
  }
};

}  // namespace mrplan
