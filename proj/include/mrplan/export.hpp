#pragma once

#include <string>
#include <vector>

#include "mrplan/grid_search.hpp"
#include "mrplan/planner.hpp"
#include "mrplan/polynomial.hpp"

namespace mrplan {

// Trajectory CSV: t, px..pz, vx..vz, ax..az, jx..jz, yaw, qw, qx, qy, qz.
// Pose recovered through the flatness map; rows sampled at `rate` Hz plus the
// final endpoint.
void write_trajectory_csv(const PiecewiseTrajectory& traj, const std::string& path,
                          double rate = 100.0);

struct TrajectoryCsvRow {
  double t;
  Vec3 p, v, a, j;
  double yaw;
  Eigen::Vector4d quat;  // w, x, y, z
};
std::vector<TrajectoryCsvRow> read_trajectory_csv(const std::string& path);

// Debug waypoint list: x, y, z per row.
void write_path_csv(const GridPath& path, const std::string& file);
std::vector<Vec3> read_path_csv(const std::string& file);

// Run summary JSON: stage timings (ms), piece labels, per-segment classes.
std::string plan_summary_json(const PlanResult& result);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mrplan
