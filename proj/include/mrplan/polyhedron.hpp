#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrplan/geometry.hpp"

namespace mrplan {

// Convex region {x : a_k . x <= b_k} with unit outward normals. Builders are
// expected to keep it bounded by including box cap rows.
struct Polyhedron {
  struct Row {
    Vec3 normal;
    double offset;
  };
  std::vector<Row> rows;

  // Adding a row normalizes it; zero normals are rejected.
  void add_row(const Vec3& normal, double offset);
  void add_box(const Vec3& lo, const Vec3& hi);

  std::size_t size() const { return rows.size(); }

  // max_k (a_k . x - b_k): <= 0 inside, > 0 outside.
  double max_residual(const Vec3& x) const;
};

// Per-row residuals a_k . x - b_k (Eq-style position constraint).
Eigen::VectorXd r3_constraint_eval(const Polyhedron& poly, const Vec3& p);

// Per-row residuals ||Q R^T a_k|| + a_k . p - b_k for the body ellipsoid
// R * Q * unit-ball + p. R must be orthonormal to 1e-6.
Eigen::VectorXd se3_constraint_eval(const Polyhedron& poly, const Mat3& R, const Vec3& p,
                                    const DroneModel& drone);

// True iff a_k . x - b_k <= slack for all rows. Negative slack demands
// interior containment by that margin.
bool poly_contains(const Polyhedron& poly, const Vec3& x, double slack = 0.0);

// Largest inscribed ball: maximize s subject to a_k . x + s <= b_k over the
// union of the given row sets. Exact small LP via basis enumeration.
// Returns nullopt when the region is empty or unbounded in s.
struct InscribedBall {
  Vec3 center;
  double radius;
};
std::optional<InscribedBall> inscribed_ball(const std::vector<const Polyhedron*>& polys);
std::optional<InscribedBall> inscribed_ball(const Polyhedron& poly);
std::optional<InscribedBall> intersection_ball(const Polyhedron& a, const Polyhedron& b);

// Vertices of the polyhedron (triples of planes, filtered by feasibility).
std::vector<Vec3> enumerate_vertices(const Polyhedron& poly, double tol = 1e-9);

// Ordered sequence of overlapping polyhedra.
struct Corridor {
  std::vector<Polyhedron> polys;

  std::size_t size() const { return polys.size(); }
  bool empty() const { return polys.empty(); }

  // Consecutive intersections admit an inscribed ball of radius
  // >= min_overlap (numerical slack 1e-6).
  bool overlaps_ok(double min_overlap) const;
};

// JSON export/import: list of polyhedra as {"rows": [{"normal": [...], "offset": b}]}.
std::string corridor_to_json(const Corridor& c);
Corridor corridor_from_json(const std::string& json_text);

// Wavefront OBJ mesh of all polyhedra (faces from vertex enumeration).
void write_corridor_obj(const Corridor& c, const std::string& path);

}  // namespace mrplan
