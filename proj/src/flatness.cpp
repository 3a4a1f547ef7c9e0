#include "mrplan/flatness.hpp"

#include <cmath>

#include "mrplan/errors.hpp"

namespace mrplan {

Mat3 flat_to_rotation(const Vec3& acc, double yaw, double eps) {
  const Vec3 thrust = acc + kGravity * Vec3::UnitZ();
  const double tn = thrust.norm();
  if (tn <= eps) throw SingularityError("flat_to_rotation: thrust-singular (free fall)");

  const Vec3 zb = thrust / tn;
  const Vec3 xc(std::cos(yaw), std::sin(yaw), 0.0);
  Vec3 yb = zb.cross(xc);
  const double yn = yb.norm();
  if (yn < 1e-6) throw SingularityError("flat_to_rotation: heading parallel to thrust");
  yb /= yn;
  const Vec3 xb = yb.cross(zb);

  Mat3 R;
  R.col(0) = xb;
  R.col(1) = yb;
  R.col(2) = zb;
  return R;
}

double yaw_tangent(const PiecewiseTrajectory& traj, double t, double eps) {
  Vec3 v = traj.eval(t, 1);
  if (std::hypot(v.x(), v.y()) >= eps) return std::atan2(v.y(), v.x());
  // Hold the most recent well-defined yaw.
  const double step = 1e-3;
  for (double s = t - step; s > 0.0; s -= step) {
    v = traj.eval(s, 1);
    if (std::hypot(v.x(), v.y()) >= eps) return std::atan2(v.y(), v.x());
  }
  return 0.0;
}

}  // namespace mrplan
