#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mrplan/errors.hpp"

namespace mrplan {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;
using Mat3 = Eigen::Matrix3d;

constexpr double kGravity = 9.81;  // m/s^2, world z up

// Axis-aligned box, closed on min, open on max for cell mapping purposes.
struct Aabb {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  bool empty() const { return (max.array() <= min.array()).any(); }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() < max.array()).all();
  }
  Vec3 extent() const { return max - min; }
};

// Full flat state of the vehicle: position and its first three derivatives.
struct FlatState {
  Vec3 p{Vec3::Zero()};
  Vec3 v{Vec3::Zero()};
  Vec3 a{Vec3::Zero()};
  Vec3 j{Vec3::Zero()};

  bool finite() const {
    return p.allFinite() && v.allFinite() && a.allFinite() && j.allFinite();
  }
  static FlatState rest(const Vec3& pos) {
    FlatState s;
    s.p = pos;
    return s;
  }
  // Largest absolute component-wise difference over all four derivatives.
  double max_diff(const FlatState& o) const {
    double d = (p - o.p).cwiseAbs().maxCoeff();
    d = std::max(d, (v - o.v).cwiseAbs().maxCoeff());
    d = std::max(d, (a - o.a).cwiseAbs().maxCoeff());
    d = std::max(d, (j - o.j).cwiseAbs().maxCoeff());
    return d;
  }
};

// Body model: enclosing ellipsoid with shape matrix Q = diag(r, r, h).
// r is the largest semi-axis, h half the height, 0 < h < r.
struct DroneModel {
  double r{0.3};
  double h{0.1};

  DroneModel() = default;
  DroneModel(double r_, double h_) : r(r_), h(h_) {
    if (!(h > 0.0) || !(h < r)) throw InvalidInputError("DroneModel requires 0 < h < r");
  }
  Mat3 shape() const { return Vec3(r, r, h).asDiagonal(); }
};

struct KinoLimits {
  double v_max{4.0};
  double a_max{15.0};
  double j_max{120.0};

  bool valid() const { return v_max > 0.0 && a_max > 0.0 && j_max > 0.0; }
};

}  // namespace mrplan
