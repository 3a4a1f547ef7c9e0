#include "mrplan/polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mrplan/errors.hpp"

namespace mrplan {

void Polyhedron::add_row(const Vec3& normal, double offset) {
  const double n = normal.norm();
  if (n < 1e-12) throw InvalidInputError("polyhedron row with zero normal");
  rows.push_back(Row{normal / n, offset / n});
}

void Polyhedron::add_box(const Vec3& lo, const Vec3& hi) {
  for (int k = 0; k < 3; ++k) {
    Vec3 n = Vec3::Zero();
    n[k] = 1.0;
    add_row(n, hi[k]);
    add_row(-n, -lo[k]);
  }
}

double Polyhedron::max_residual(const Vec3& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) worst = std::max(worst, r.normal.dot(x) - r.offset);
  return worst;
}

Eigen::VectorXd r3_constraint_eval(const Polyhedron& poly, const Vec3& p) {
  Eigen::VectorXd res(poly.rows.size());
  for (std::size_t k = 0; k < poly.rows.size(); ++k) {
    res[k] = poly.rows[k].normal.dot(p) - poly.rows[k].offset;
  }
  return res;
}

Eigen::VectorXd se3_constraint_eval(const Polyhedron& poly, const Mat3& R, const Vec3& p,
                                    const DroneModel& drone) {
  if ((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-6) {
    throw PreconditionError("se3_constraint_eval: R is not orthonormal");
  }
  const Mat3 Q = drone.shape();
  Eigen::VectorXd res(poly.rows.size());
  for (std::size_t k = 0; k < poly.rows.size(); ++k) {
    const Vec3& a = poly.rows[k].normal;
    res[k] = (Q * (R.transpose() * a)).norm() + a.dot(p) - poly.rows[k].offset;
  }
  return res;
}

bool poly_contains(const Polyhedron& poly, const Vec3& x, double slack) {
  for (const auto& r : poly.rows) {
    if (r.normal.dot(x) - r.offset > slack) return false;
  }
  return true;
}

namespace {

struct LpRow {
  Eigen::Vector4d a;  // (normal, 1)
  double b;
};

std::vector<LpRow> gather_rows(const std::vector<const Polyhedron*>& polys) {
  std::vector<LpRow> rows;
  for (const auto* p : polys) {
    for (const auto& r : p->rows) {
      LpRow lr;
      lr.a << r.normal, 1.0;
      lr.b = r.offset;
      // Drop duplicates, keeping the tighter offset.
      bool dup = false;
      for (auto& existing : rows) {
        if ((existing.a.head<3>() - lr.a.head<3>()).norm() < 1e-12) {
          existing.b = std::min(existing.b, lr.b);
          dup = true;
          break;
        }
      }
      if (!dup) rows.push_back(lr);
    }
  }
  return rows;
}

}  // namespace

std::optional<InscribedBall> inscribed_ball(const std::vector<const Polyhedron*>& polys) {
  // maximize s subject to a_k . x + s <= b_k. Small and exact: the optimum is
  // a basic solution, so enumerate 4-row bases.
  const std::vector<LpRow> rows = gather_rows(polys);
  const std::size_t n = rows.size();
  if (n < 4) return std::nullopt;

  double best_s = -std::numeric_limits<double>::infinity();
  Vec3 best_x = Vec3::Zero();

  Eigen::Matrix4d M;
  Eigen::Vector4d rhs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
          M.row(0) = rows[i].a;
          M.row(1) = rows[j].a;
          M.row(2) = rows[k].a;
          M.row(3) = rows[l].a;
          rhs << rows[i].b, rows[j].b, rows[k].b, rows[l].b;
          const Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
          if (!lu.isInvertible()) continue;
          const Eigen::Vector4d cand = lu.solve(rhs);
          if (!cand.allFinite() || cand[3] <= best_s) continue;
          bool feasible = true;
          for (const auto& r : rows) {
            if (r.a.dot(cand) - r.b > 1e-9) {
              feasible = false;
              break;
            }
          }
          if (feasible) {
            best_s = cand[3];
            best_x = cand.head<3>();
          }
        }
      }
    }
  }
  if (!std::isfinite(best_s)) return std::nullopt;
  return InscribedBall{best_x, best_s};
}

std::optional<InscribedBall> inscribed_ball(const Polyhedron& poly) {
  return inscribed_ball(std::vector<const Polyhedron*>{&poly});
}

std::optional<InscribedBall> intersection_ball(const Polyhedron& a, const Polyhedron& b) {
  return inscribed_ball(std::vector<const Polyhedron*>{&a, &b});
}

std::vector<Vec3> enumerate_vertices(const Polyhedron& poly, double tol) {
  std::vector<Vec3> verts;
  const auto& rows = poly.rows;
  const std::size_t n = rows.size();
  Mat3 M;
  Vec3 rhs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        M.row(0) = rows[i].normal;
        M.row(1) = rows[j].normal;
        M.row(2) = rows[k].normal;
        rhs << rows[i].offset, rows[j].offset, rows[k].offset;
        const Eigen::FullPivLU<Mat3> lu(M);
        if (!lu.isInvertible()) continue;
        const Vec3 v = lu.solve(rhs);
        if (!v.allFinite()) continue;
        if (poly.max_residual(v) > tol) continue;
        bool dup = false;
        for (const auto& u : verts) {
          if ((u - v).norm() < 1e-8) {
            dup = true;
            break;
          }
        }
        if (!dup) verts.push_back(v);
      }
    }
  }
  return verts;
}

bool Corridor::overlaps_ok(double min_overlap) const {
  for (std::size_t i = 0; i + 1 < polys.size(); ++i) {
    const auto ball = intersection_ball(polys[i], polys[i + 1]);
    if (!ball || ball->radius < min_overlap - 1e-6) return false;
  }
  return true;
}

std::string corridor_to_json(const Corridor& c) {
  nlohmann::json root;
  root["polyhedra"] = nlohmann::json::array();
  for (const auto& p : c.polys) {
    nlohmann::json jp;
    jp["rows"] = nlohmann::json::array();
    for (const auto& r : p.rows) {
      jp["rows"].push_back({{"normal", {r.normal.x(), r.normal.y(), r.normal.z()}},
                            {"offset", r.offset}});
    }
    root["polyhedra"].push_back(jp);
  }
  return root.dump(2);
}

Corridor corridor_from_json(const std::string& json_text) {
  Corridor c;
  const auto root = nlohmann::json::parse(json_text);
  for (const auto& jp : root.at("polyhedra")) {
    Polyhedron p;
    for (const auto& jr : jp.at("rows")) {
      const auto& n = jr.at("normal");
      p.add_row(Vec3(n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>()),
                jr.at("offset").get<double>());
    }
    c.polys.push_back(std::move(p));
  }
  return c;
}

void write_corridor_obj(const Corridor& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write OBJ file: " + path);
  out.precision(9);
  std::size_t base = 1;
  for (std::size_t pi = 0; pi < c.polys.size(); ++pi) {
    const auto& poly = c.polys[pi];
    const auto verts = enumerate_vertices(poly, 1e-7);
    out << "o poly_" << pi << "\n";
    for (const auto& v : verts) {
      out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    }
    for (const auto& row : poly.rows) {
      // Collect the vertices on this face and order them around the normal.
      std::vector<std::size_t> face;
      for (std::size_t vi = 0; vi < verts.size(); ++vi) {
        if (std::abs(row.normal.dot(verts[vi]) - row.offset) < 1e-6) face.push_back(vi);
      }
      if (face.size() < 3) continue;
      Vec3 centroid = Vec3::Zero();
      for (auto vi : face) centroid += verts[vi];
      centroid /= static_cast<double>(face.size());
      Vec3 u = (verts[face[0]] - centroid).normalized();
      const Vec3 w = row.normal.cross(u).normalized();
      std::sort(face.begin(), face.end(), [&](std::size_t lhs, std::size_t rhs) {
        const Vec3 dl = verts[lhs] - centroid, dr = verts[rhs] - centroid;
        return std::atan2(w.dot(dl), u.dot(dl)) < std::atan2(w.dot(dr), u.dot(dr));
      });
      out << "f";
      for (auto vi : face) out << " " << (base + vi);
      out << "\n";
    }
    base += verts.size();
  }
}

}  // namespace mrplan
