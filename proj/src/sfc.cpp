#include "mrplan/sfc.hpp"

#include <algorithm>
#include <cmath>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {

Vec3 closest_on_segment(const SeedSegment& seed, const Vec3& x) {
  const Vec3 d = seed.b - seed.a;
  const double len2 = d.squaredNorm();
  if (len2 < 1e-24) return seed.a;
  const double t = std::clamp((x - seed.a).dot(d) / len2, 0.0, 1.0);
  return seed.a + t * d;
}

}  // namespace

Polyhedron inflate_polyhedron(const SeedSegment& seed, const VoxelGrid& grid,
                              double max_box, double face_margin_cells) {
  const double res = grid.resolution();
  const double margin = face_margin_cells * res;
  if (!(max_box > res)) throw PreconditionError("max_box must exceed one cell");

  // Seed must be strictly in free space.
  const int seed_samples = seed.is_point() ? 1 : 16;
  for (int k = 0; k < seed_samples; ++k) {
    const double t = seed_samples == 1 ? 0.0 : k / double(seed_samples - 1);
    const Vec3 p = seed.a + t * (seed.b - seed.a);
    if (grid.query_occupied(p)) throw PreconditionError("inflation seed is occupied");
  }

  // Cell-index box covering the seed.
  Vec3i lo = grid.cell_of(seed.a).cwiseMin(grid.cell_of(seed.b));
  Vec3i hi = grid.cell_of(seed.a).cwiseMax(grid.cell_of(seed.b));
  lo = lo.cwiseMax(Vec3i::Zero());
  hi = hi.cwiseMin(grid.dims() - Vec3i::Ones());

  const Vec3 seed_lo = seed.a.cwiseMin(seed.b);
  const Vec3 seed_hi = seed.a.cwiseMax(seed.b);

  // Cell-count growth limit per direction, from the seed's own cells.
  const int grow_cells = static_cast<int>(std::ceil(max_box / res));
  const Vec3i lo0 = lo, hi0 = hi;

  // Phase 1: grow faces one cell layer at a time, round-robin, freezing a
  // face when its next layer holds an occupied cell or leaves the grid.
  bool frozen[6] = {false, false, false, false, false, false};
  auto layer_free = [&](int face) -> bool {
    Vec3i a = lo, b = hi;
    switch (face) {
      case 0: a.x() = b.x() = hi.x() + 1; break;
      case 1: a.x() = b.x() = lo.x() - 1; break;
      case 2: a.y() = b.y() = hi.y() + 1; break;
      case 3: a.y() = b.y() = lo.y() - 1; break;
      case 4: a.z() = b.z() = hi.z() + 1; break;
      case 5: a.z() = b.z() = lo.z() - 1; break;
    }
    if ((a.array() < 0).any() || (b.array() >= grid.dims().array()).any()) return false;
    for (int z = a.z(); z <= b.z(); ++z) {
      for (int y = a.y(); y <= b.y(); ++y) {
        for (int x = a.x(); x <= b.x(); ++x) {
          if (grid.occupied_in_bounds(Vec3i(x, y, z))) return false;
        }
      }
    }
    return true;
  };

  bool any = true;
  while (any) {
    any = false;
    for (int face = 0; face < 6; ++face) {
      if (frozen[face]) continue;
      const int axis = face / 2;
      const bool positive = (face % 2) == 0;
      const int steps = positive ? hi[axis] - hi0[axis] : lo0[axis] - lo[axis];
      if (steps >= grow_cells) {
        frozen[face] = true;
        continue;
      }
      if (!layer_free(face)) {
        frozen[face] = true;
        continue;
      }
      if (positive) {
        ++hi[axis];
      } else {
        --lo[axis];
      }
      any = true;
    }
  }

  // Phase 2: face placement. Blocked faces go `margin` in front of the
  // nearest blocking cell-center plane; max_box-limited faces at the cap;
  // everything clamped into the grid bounds.
  const Aabb gb = grid.bounds();
  Vec3 flo, fhi;
  for (int axis = 0; axis < 3; ++axis) {
    const double cap_hi = seed_hi[axis] + max_box;
    const double cap_lo = seed_lo[axis] - max_box;
    const double cell_hi = grid.origin()[axis] + (hi[axis] + 1) * res;
    const double cell_lo = grid.origin()[axis] + lo[axis] * res;
    // blocking layer center plane sits res/2 beyond the last free layer
    fhi[axis] = std::min(cap_hi, cell_hi + (0.5 - face_margin_cells) * res);
    flo[axis] = std::max(cap_lo, cell_lo - (0.5 - face_margin_cells) * res);
    fhi[axis] = std::min(fhi[axis], gb.max[axis]);
    flo[axis] = std::max(flo[axis], gb.min[axis]);
  }

  Polyhedron poly;
  poly.add_box(flo, fhi);

  // Phase 3: cutting planes through near-interior occupied cell centers,
  // iterated to fixpoint. A center is cut while it sits deeper inside than
  // half a cell.
  const Vec3i scan_lo = grid.cell_of(flo).cwiseMax(Vec3i::Zero());
  const Vec3i scan_hi = grid.cell_of(fhi).cwiseMin(grid.dims() - Vec3i::Ones());
  const double cut_thresh = -0.5 * res * (1.0 - 1e-9);

  for (int iter = 0; iter < 10000; ++iter) {
    double worst = cut_thresh;
    std::optional<Vec3> worst_center;
    for (int z = scan_lo.z(); z <= scan_hi.z(); ++z) {
      for (int y = scan_lo.y(); y <= scan_hi.y(); ++y) {
        for (int x = scan_lo.x(); x <= scan_hi.x(); ++x) {
          const Vec3i c(x, y, z);
          if (!grid.occupied_in_bounds(c)) continue;
          const Vec3 cc = grid.cell_center(c);
          const double r = poly.max_residual(cc);
          if (r < worst) {
            worst = r;
            worst_center = cc;
          }
        }
      }
    }
    if (!worst_center) break;
    const Vec3 q = closest_on_segment(seed, *worst_center);
    Vec3 n = *worst_center - q;
    if (n.norm() < 1e-12) throw PreconditionError("inflation seed touches an obstacle");
    n.normalize();
    poly.add_row(n, n.dot(*worst_center) - margin);
  }
  return poly;
}

std::optional<LineSeed> generate_line_seed(const GridPath& path, const VoxelGrid& hrm_raw,
                                           double r) {
  if (path.waypoints.empty()) throw PreconditionError("line seed needs a nonempty path");
  const double d_c = 2.0 * r;
  const double res = hrm_raw.resolution();

  std::vector<Vec3> narrow_pts;   // N: waypoints passing through the narrow area
  std::vector<std::size_t> narrow_idx;
  std::vector<Vec3> obstacle_pts; // O: cell centers on both sides of the gap

  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const Vec3& q = path.waypoints[i];
    const auto oa = nearest_occupied_within(hrm_raw, q, d_c);
    if (!oa) continue;
    Vec3 dir = q - *oa;
    if (dir.norm() < 1e-9) continue;
    dir.normalize();
    const auto hit = segment_first_collision(hrm_raw, q, q + d_c * dir);
    if (!hit) continue;
    // Reject boundary exits; only real occupied cells count.
    const Vec3i hit_cell = hrm_raw.cell_of(*hit + 1e-6 * dir);
    if (!hrm_raw.in_bounds(hit_cell) || !hrm_raw.occupied_in_bounds(hit_cell)) continue;
    obstacle_pts.push_back(*oa);
    obstacle_pts.push_back(hrm_raw.cell_center(hit_cell));
    narrow_pts.push_back(q);
    narrow_idx.push_back(i);
  }
  if (narrow_pts.empty()) return std::nullopt;

  // Direction: mean of unit steps between consecutive narrow waypoints, with
  // fallbacks for degenerate sets.
  Vec3 dir_acc = Vec3::Zero();
  for (std::size_t i = 0; i + 1 < narrow_pts.size(); ++i) {
    const Vec3 d = narrow_pts[i + 1] - narrow_pts[i];
    if (d.norm() > 1e-12) dir_acc += d.normalized();
  }
  Vec3 d_s;
  if (dir_acc.norm() >= 1e-6) {
    d_s = dir_acc.normalized();
  } else if ((narrow_pts.back() - narrow_pts.front()).norm() >= 1e-6) {
    d_s = (narrow_pts.back() - narrow_pts.front()).normalized();
  } else {
    // Single narrow waypoint: fall back to the local path direction.
    const std::size_t i = narrow_idx.front();
    const std::size_t a = i > 0 ? i - 1 : i;
    const std::size_t b = std::min(i + 1, path.waypoints.size() - 1);
    const Vec3 d = path.waypoints[b] - path.waypoints[a];
    if (d.norm() < 1e-9) return std::nullopt;
    d_s = d.normalized();
  }

  Vec3 centroid = Vec3::Zero();
  for (const auto& o : obstacle_pts) centroid += o;
  centroid /= static_cast<double>(obstacle_pts.size());

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& q : narrow_pts) {
    const double s = d_s.dot(q - centroid);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }

  LineSeed seed;
  seed.dir = d_s;
  seed.mid = centroid;
  seed.length = std::max(hi - lo, 2.0 * res);
  return seed;
}

namespace {

// Nudge a point along +/- dir (up to max_cells) until its cell is free.
std::optional<Vec3> free_nudge(const VoxelGrid& grid, const Vec3& p, const Vec3& dir,
                               double max_cells) {
  if (!grid.query_occupied(p)) return p;
  const double step = 0.5 * grid.resolution();
  const int n = static_cast<int>(max_cells * 2);
  for (int k = 1; k <= n; ++k) {
    for (const double sgn : {+1.0, -1.0}) {
      const Vec3 cand = p + sgn * k * step * dir;
      if (!grid.query_occupied(cand)) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace

Corridor narrow_gap_corridor(const LineSeed& seed, const VoxelGrid& hrm_raw,
                             const DroneModel& drone, const NarrowCorridorParams& params) {
  const double res = hrm_raw.resolution();
  const Vec3 half = 0.5 * seed.length * seed.dir;

  auto ea = free_nudge(hrm_raw, seed.mid - half, seed.dir, 2.0);
  auto eb = free_nudge(hrm_raw, seed.mid + half, seed.dir, 2.0);
  if (!ea || !eb) throw PreconditionError("narrow corridor seed endpoint stuck in obstacle");

  // Gap plug: faces on blocking cell centers (margin 0), capped along the
  // seed direction so the whole-body constraint binds only near the gap.
  Polyhedron p2 = inflate_polyhedron(SeedSegment::segment(*ea, *eb), hrm_raw,
                                     params.lateral_box, 0.0);
  const double cap = 2.0 * drone.r + res;
  p2.add_row(seed.dir, seed.dir.dot(*eb + cap * seed.dir));
  p2.add_row(-seed.dir, -seed.dir.dot(*ea - cap * seed.dir));

  // Side polyhedra flare into the open space on both sides of the wall.
  const double push = params.seed_pushout_cells * res;
  auto sa = free_nudge(hrm_raw, *ea - push * seed.dir, seed.dir, 4.0);
  auto sb = free_nudge(hrm_raw, *eb + push * seed.dir, seed.dir, 4.0);
  if (!sa || !sb) throw PreconditionError("narrow corridor side seed stuck in obstacle");

  Polyhedron p1 = inflate_polyhedron(SeedSegment::point(*sa), hrm_raw, params.lateral_box, 0.0);
  Polyhedron p3 = inflate_polyhedron(SeedSegment::point(*sb), hrm_raw, params.lateral_box, 0.0);

  Corridor c;
  c.polys = {std::move(p1), std::move(p2), std::move(p3)};
  if (!c.overlaps_ok(params.min_overlap)) {
    throw CorridorError("narrow corridor overlap below the required ball radius");
  }
  return c;
}

Corridor sfc_along_path(const GridPath& path, const VoxelGrid& grid, const SfcParams& params) {
  if (path.waypoints.empty()) throw PreconditionError("sfc needs a nonempty path");
  for (const auto& w : path.waypoints) {
    if (grid.query_occupied(w)) throw PreconditionError("sfc path waypoint is occupied");
  }

  Corridor c;
  const auto& wps = path.waypoints;
  std::size_t i = 0;
  std::size_t prev_cover = 0;
  SeedSegment seed = SeedSegment::point(wps[0]);

  while (true) {
    if (c.size() >= params.max_polyhedra) throw CorridorError("sfc cover grew too long");
    Polyhedron poly = inflate_polyhedron(seed, grid, params.max_box, params.face_margin_cells);

    std::size_t j = i;
    while (j + 1 < wps.size() && poly_contains(poly, wps[j + 1], 1e-9)) ++j;
    if (!c.polys.empty() && j <= prev_cover) {
      throw CorridorError("sfc cover failed to advance at waypoint " + std::to_string(j));
    }
    prev_cover = j;
    c.polys.push_back(std::move(poly));
    if (j + 1 >= wps.size()) break;

    // Re-seed with the outgoing segment when it is free, else from the next
    // waypoint alone (diagonal corner steps can clip occupied cells).
    const bool segment_free = !segment_first_collision(grid, wps[j], wps[j + 1]).has_value();
    if (segment_free) {
      seed = SeedSegment::segment(wps[j], wps[j + 1]);
      i = j;
    } else {
      seed = SeedSegment::point(wps[j + 1]);
      i = j + 1;
    }
  }

  if (!c.overlaps_ok(params.min_overlap)) {
    throw CorridorError("sfc consecutive overlap below the required ball radius");
  }
  return c;
}

}  // namespace mrplan
