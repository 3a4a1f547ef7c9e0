#include "mrplan/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrplan/errors.hpp"

namespace mrplan {

VoxelGrid::VoxelGrid(const Vec3& origin, double resolution, const Vec3i& dims,
                     bool outside_occupied)
    : origin_(origin), res_(resolution), dims_(dims), outside_occupied_(outside_occupied) {
  if (!(resolution > 0.0)) throw InvalidInputError("VoxelGrid resolution must be > 0");
  if ((dims.array() < 1).any()) throw InvalidInputError("VoxelGrid dims must be >= 1");
  occ_.assign(static_cast<std::size_t>(dims.x()) * dims.y() * dims.z(), 0);
}

std::size_t VoxelGrid::occupied_count() const {
  std::size_t n = 0;
  for (auto v : occ_) n += (v != 0);
  return n;
}

namespace {

Vec3i dims_for(const Aabb& bounds, double resolution) {
  Vec3 ext = bounds.extent();
  Vec3i d;
  for (int k = 0; k < 3; ++k) {
    d[k] = std::max(1, static_cast<int>(std::ceil(ext[k] / resolution - 1e-9)));
  }
  return d;
}

}  // namespace

VoxelGrid build_voxel_grid(const PointCloud& cloud, double resolution, const Aabb& bounds) {
  if (!(resolution > 0.0)) throw PreconditionError("resolution must be > 0");
  if (bounds.empty()) throw PreconditionError("bounds must be nonempty");
  if (!cloud.all_finite()) throw InvalidInputError("point cloud contains non-finite point");

  VoxelGrid g(bounds.min, resolution, dims_for(bounds, resolution));
  for (const auto& p : cloud.points) {
    const Vec3i c = g.cell_of(p);
    if (g.in_bounds(c)) g.occ_[g.linear(c)] = 1;
  }
  return g;
}

namespace {

void stamp_cspace_points(VoxelGrid& g, const PointCloud& cloud, double radius) {
  const double resolution = g.resolution();
  const int reach = static_cast<int>(std::ceil(radius / resolution + 0.5)) + 1;
  const double r2 = radius * radius * (1.0 + 1e-12) + 1e-15;

  for (const auto& p : cloud.points) {
    const Vec3i pc = g.cell_of(p);
    // The containing cell is always occupied.
    if (g.in_bounds(pc)) g.occ_[g.linear(pc)] = 1;
    for (int dz = -reach; dz <= reach; ++dz) {
      for (int dy = -reach; dy <= reach; ++dy) {
        for (int dx = -reach; dx <= reach; ++dx) {
          const Vec3i c = pc + Vec3i(dx, dy, dz);
          if (!g.in_bounds(c)) continue;
          if ((g.cell_center(c) - p).squaredNorm() <= r2) g.occ_[g.linear(c)] = 1;
        }
      }
    }
  }
}

}  // namespace

VoxelGrid build_cspace_grid(const PointCloud& cloud, double resolution, double radius,
                            const Aabb& bounds) {
  if (!(resolution > 0.0)) throw PreconditionError("resolution must be > 0");
  if (!(radius >= 0.0)) throw PreconditionError("radius must be >= 0");
  if (bounds.empty()) throw PreconditionError("bounds must be nonempty");
  if (!cloud.all_finite()) throw InvalidInputError("point cloud contains non-finite point");

  VoxelGrid g(bounds.min, resolution, dims_for(bounds, resolution));
  stamp_cspace_points(g, cloud, radius);
  return g;
}

VoxelGrid add_points_cspace(const VoxelGrid& grid, const PointCloud& pts, double radius) {
  if (!pts.all_finite()) throw InvalidInputError("point cloud contains non-finite point");
  VoxelGrid g = grid;
  stamp_cspace_points(g, pts, radius);
  return g;
}

VoxelGrid add_points_raw(const VoxelGrid& grid, const PointCloud& pts) {
  if (!pts.all_finite()) throw InvalidInputError("point cloud contains non-finite point");
  VoxelGrid g = grid;
  for (const auto& p : pts.points) {
    const Vec3i c = g.cell_of(p);
    if (g.in_bounds(c)) g.occ_[g.linear(c)] = 1;
  }
  return g;
}

VoxelGrid inflate_grid(const VoxelGrid& grid, double radius) {
  if (!(radius >= 0.0)) throw PreconditionError("inflate radius must be >= 0");
  VoxelGrid out = grid;
  if (radius == 0.0 || grid.occupied_count() == 0) return out;

  // Work in integer cell units so exact-boundary offsets (e.g. face neighbors
  // at distance exactly r) are classified without floating-point noise.
  const double t = radius / grid.resolution();
  const double t2 = t * t + 1e-9;
  const int reach = static_cast<int>(std::floor(t + 1e-9));

  std::vector<Vec3i> stamp;
  for (int dz = -reach; dz <= reach; ++dz) {
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        if (dx * dx + dy * dy + dz * dz <= t2) stamp.emplace_back(dx, dy, dz);
      }
    }
  }

  const auto& dims = grid.dims();
  for (int z = 0; z < dims.z(); ++z) {
    for (int y = 0; y < dims.y(); ++y) {
      for (int x = 0; x < dims.x(); ++x) {
        const Vec3i c(x, y, z);
        if (!grid.occupied_in_bounds(c)) continue;
        for (const auto& d : stamp) {
          const Vec3i n = c + d;
          if (out.in_bounds(n)) out.occ_[out.linear(n)] = 1;
        }
      }
    }
  }
  return out;
}

std::optional<Vec3> segment_first_collision(const VoxelGrid& grid, const Vec3& p0,
                                            const Vec3& p1) {
  if (!p0.allFinite() || !p1.allFinite()) {
    throw PreconditionError("segment endpoints must be finite");
  }
  if (grid.query_occupied(p0)) return p0;

  const Vec3 d = p1 - p0;
  const double len = d.norm();
  if (len < 1e-15) return std::nullopt;

  // Amanatides-Woo traversal in the cell lattice of the grid, extended to
  // cells outside the bounds (which count as occupied when configured so).
  Vec3i cell = grid.cell_of(p0);
  const Vec3i goal_cell = grid.cell_of(p1);
  const double res = grid.resolution();

  Vec3i step;
  Vec3 t_max, t_delta;
  for (int k = 0; k < 3; ++k) {
    if (d[k] > 0) {
      step[k] = 1;
      const double border = grid.origin()[k] + (cell[k] + 1) * res;
      t_max[k] = (border - p0[k]) / d[k];
      t_delta[k] = res / d[k];
    } else if (d[k] < 0) {
      step[k] = -1;
      const double border = grid.origin()[k] + cell[k] * res;
      t_max[k] = (border - p0[k]) / d[k];
      t_delta[k] = res / -d[k];
    } else {
      step[k] = 0;
      t_max[k] = std::numeric_limits<double>::infinity();
      t_delta[k] = std::numeric_limits<double>::infinity();
    }
  }

  double t = 0.0;
  while (t <= 1.0) {
    if (cell == goal_cell) break;
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    t = t_max[axis];
    if (t > 1.0) break;
    cell[axis] += step[axis];
    t_max[axis] += t_delta[axis];
    if (grid.occupied(cell)) {
      return p0 + std::min(t, 1.0) * d;
    }
  }
  return std::nullopt;
}

std::optional<Vec3> nearest_occupied_within(const VoxelGrid& grid, const Vec3& p,
                                            double d_max) {
  if (!(d_max > 0.0)) throw PreconditionError("d_max must be > 0");
  const double res = grid.resolution();
  const Vec3i pc = grid.cell_of(p);
  const int reach = static_cast<int>(std::ceil(d_max / res)) + 1;

  double best_d2 = d_max * d_max * (1.0 + 1e-12);
  std::optional<Vec3i> best;

  // Expand ring by ring; once a hit is found, only rings that could still
  // contain a closer center need scanning.
  for (int ring = 0; ring <= reach; ++ring) {
    if (best) {
      const double ring_min = std::max(0.0, (ring - 0.5) * res);
      if (ring_min * ring_min > best_d2) break;
    }
    for (int dz = -ring; dz <= ring; ++dz) {
      for (int dy = -ring; dy <= ring; ++dy) {
        for (int dx = -ring; dx <= ring; ++dx) {
          if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
          const Vec3i c = pc + Vec3i(dx, dy, dz);
          if (!grid.in_bounds(c) || !grid.occupied_in_bounds(c)) continue;
          const double d2 = (grid.cell_center(c) - p).squaredNorm();
          if (d2 < best_d2 - 1e-15) {
            best_d2 = d2;
            best = c;
          } else if (best && std::abs(d2 - best_d2) <= 1e-15) {
            // Lexicographic tie-break on the cell index.
            const Vec3i& b = *best;
            if (std::tie(c.x(), c.y(), c.z()) < std::tie(b.x(), b.y(), b.z())) best = c;
          }
        }
      }
    }
  }
  if (!best) return std::nullopt;
  return grid.cell_center(*best);
}

}  // namespace mrplan
