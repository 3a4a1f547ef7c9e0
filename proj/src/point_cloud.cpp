#include "mrplan/point_cloud.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "mrplan/errors.hpp"

namespace mrplan {

bool PointCloud::all_finite() const {
  for (const auto& p : points) {
    if (!p.allFinite()) return false;
  }
  return true;
}

Aabb PointCloud::bounding_box() const {
  Aabb box;
  if (points.empty()) return box;
  box.min = box.max = points.front();
  for (const auto& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

PointCloud read_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open PLY file: " + path);

  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    throw IoError("not a PLY file: " + path);
  }

  std::size_t vertex_count = 0;
  int x_idx = -1, y_idx = -1, z_idx = -1;
  int prop_idx = 0;
  bool ascii = false;
  bool in_vertex_element = false;

  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "comment") continue;
    if (tok == "format") {
      std::string fmt;
      ss >> fmt;
      ascii = (fmt == "ascii");
    } else if (tok == "element") {
      std::string name;
      ss >> name;
      in_vertex_element = (name == "vertex");
      if (in_vertex_element) ss >> vertex_count;
      prop_idx = 0;
    } else if (tok == "property" && in_vertex_element) {
      std::string type, name;
      ss >> type >> name;
      if (name == "x") x_idx = prop_idx;
      if (name == "y") y_idx = prop_idx;
      if (name == "z") z_idx = prop_idx;
      ++prop_idx;
    } else if (tok == "end_header") {
      break;
    }
  }
  if (!ascii) throw IoError("only ascii PLY is supported: " + path);
  if (x_idx < 0 || y_idx < 0 || z_idx < 0) {
    throw IoError("PLY vertex element lacks x/y/z properties: " + path);
  }

  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) throw IoError("PLY truncated: " + path);
    std::istringstream ss(line);
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) <= std::max({x_idx, y_idx, z_idx})) {
      throw IoError("PLY vertex line too short: " + path);
    }
    Vec3 p(vals[x_idx], vals[y_idx], vals[z_idx]);
    if (!p.allFinite()) throw InvalidInputError("non-finite point in PLY: " + path);
    cloud.points.push_back(p);
  }
  return cloud;
}

void write_ply(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write PLY file: " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << cloud.points.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "end_header\n";
  out.precision(9);
  for (const auto& p : cloud.points) {
    out << p.x() << " " << p.y() << " " << p.z() << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

PointCloud sensor_reveal(const PointCloud& world, const Vec3& pose, double radius) {
  if (!(radius > 0.0)) throw PreconditionError("sensor_reveal requires radius > 0");
  PointCloud out;
  const double r2 = radius * radius;
  for (const auto& p : world.points) {
    if ((p - pose).squaredNorm() <= r2) out.points.push_back(p);
  }
  return out;
}

}  // namespace mrplan
