#pragma once

#include "mrplan/geometry.hpp"
#include "mrplan/polynomial.hpp"

namespace mrplan {

// Attitude from the flat state: body z along the thrust direction a + g*e3,
// body x projected toward the yaw heading. Throws SingularityError on
// free-fall (thrust norm below eps) or pitch-degenerate inputs.
Mat3 flat_to_rotation(const Vec3& acc, double yaw, double eps = 1e-3);

// Sequential yaw-from-velocity with hold-last behavior below eps horizontal
// speed. Feed samples in increasing time order.
class YawTracker {
 public:
  explicit YawTracker(double eps = 1e-3) : eps_(eps) {}
  double update(const Vec3& v) {
    if (std::hypot(v.x(), v.y()) >= eps_) yaw_ = std::atan2(v.y(), v.x());
    return yaw_;
  }
  double yaw() const { return yaw_; }

 private:
  double eps_;
  double yaw_{0.0};
};

// Tangent-direction yaw at time t; holds the most recent well-defined yaw
// through hover intervals (0 if never defined).
double yaw_tangent(const PiecewiseTrajectory& traj, double t, double eps = 1e-3);

}  // namespace mrplan
