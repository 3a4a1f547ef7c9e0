#pragma once

#include "mrplan/geometry.hpp"
#include "mrplan/polyhedron.hpp"
#include "mrplan/polynomial.hpp"

namespace mrplan {

enum class PlanMode { R3, SE3 };

struct ValidationReport {
  bool pass{false};
  double max_corridor_residual{-std::numeric_limits<double>::infinity()};
  double max_v{0.0}, max_a{0.0}, max_j{0.0};
  double first_violation_time{-1.0};
  int first_violation_row{-1};  // -1: none, -2: kinodynamic, -3: singularity
  std::string reason;
};

// Independent acceptance oracle: re-derives the attitude from the flat state
// (tangent yaw + thrust direction) and evaluates the corridor constraints via
// the stacked entry-wise matrix form, one polyhedron per trajectory piece,
// plus the kinodynamic norms, on a dt grid. Pass tolerance is 1e-6.
//
// This path deliberately shares no constraint code with the optimizer.
ValidationReport validate_trajectory(const PiecewiseTrajectory& traj, const Corridor& corridor,
                                     const DroneModel& drone, PlanMode mode,
                                     const KinoLimits& limits, double dt = 1e-3);

}  // namespace mrplan
