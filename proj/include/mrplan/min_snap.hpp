#pragma once

#include <vector>

#include "mrplan/polynomial.hpp"

namespace mrplan {

// Minimum-snap interpolation: given full boundary states, interior waypoint
// positions and per-piece durations, the junction velocities/accelerations/
// jerks are chosen to minimize the total snap energy. The result is the
// unique jerk-continuous spline through the waypoints.
PiecewiseTrajectory min_snap_interpolate(const FlatState& start, const FlatState& goal,
                                         const std::vector<Vec3>& interior,
                                         const std::vector<double>& durations);

// Integral of the squared 4th derivative over the whole trajectory.
double snap_energy(const PiecewiseTrajectory& traj);

}  // namespace mrplan
