#pragma once

#include <string>
#include <vector>

#include "mrplan/geometry.hpp"

namespace mrplan {

// Plain container of 3D obstacle points in meters.
struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void append(const PointCloud& other) {
    points.insert(points.end(), other.points.begin(), other.points.end());
  }
  bool all_finite() const;
  Aabb bounding_box() const;
};

// ASCII PLY with "element vertex" and float/double x, y, z properties.
PointCloud read_ply(const std::string& path);
void write_ply(const PointCloud& cloud, const std::string& path);

// All world points within Euclidean `radius` of `pose`.
// Simulated omnidirectional sensor used by the receding-horizon session.
PointCloud sensor_reveal(const PointCloud& world, const Vec3& pose, double radius);

}  // namespace mrplan
