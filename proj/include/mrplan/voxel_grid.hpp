#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrplan/geometry.hpp"
#include "mrplan/point_cloud.hpp"

namespace mrplan {

// Dense boolean occupancy grid. Immutable after construction: all mutating
// members are private to the builders below. Points outside the bounds are
// treated as occupied by default so planners cannot route through unmapped
// space.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(const Vec3& origin, double resolution, const Vec3i& dims,
            bool outside_occupied = true);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return res_; }
  const Vec3i& dims() const { return dims_; }
  bool outside_occupied() const { return outside_occupied_; }
  std::size_t cell_count() const { return occ_.size(); }

  bool in_bounds(const Vec3i& c) const {
    return c.x() >= 0 && c.y() >= 0 && c.z() >= 0 && c.x() < dims_.x() &&
           c.y() < dims_.y() && c.z() < dims_.z();
  }
  bool in_bounds(const Vec3& p) const { return in_bounds(cell_of(p)); }

  // World point -> containing cell index (may be out of bounds).
  Vec3i cell_of(const Vec3& p) const {
    return Vec3i(static_cast<int>(std::floor((p.x() - origin_.x()) / res_)),
                 static_cast<int>(std::floor((p.y() - origin_.y()) / res_)),
                 static_cast<int>(std::floor((p.z() - origin_.z()) / res_)));
  }
  Vec3 cell_center(const Vec3i& c) const {
    return origin_ + (c.cast<double>() + Vec3::Constant(0.5).eval()) * res_;
  }

  bool occupied(const Vec3i& c) const {
    if (!in_bounds(c)) return outside_occupied_;
    return occ_[linear(c)] != 0;
  }
  bool occupied_in_bounds(const Vec3i& c) const { return occ_[linear(c)] != 0; }

  // True iff the containing cell is occupied or the point is out of bounds.
  bool query_occupied(const Vec3& p) const { return occupied(cell_of(p)); }

  std::size_t occupied_count() const;
  Aabb bounds() const { return Aabb{origin_, origin_ + dims_.cast<double>() * res_}; }

  std::size_t linear(const Vec3i& c) const {
    return static_cast<std::size_t>(c.x()) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(c.y()) +
                static_cast<std::size_t>(dims_.y()) * static_cast<std::size_t>(c.z()));
  }
  Vec3i delinear(std::size_t idx) const {
    const int x = static_cast<int>(idx % dims_.x());
    const int y = static_cast<int>((idx / dims_.x()) % dims_.y());
    const int z = static_cast<int>(idx / (static_cast<std::size_t>(dims_.x()) * dims_.y()));
    return Vec3i(x, y, z);
  }

  const std::vector<std::uint8_t>& raw() const { return occ_; }
  bool same_layout(const VoxelGrid& o) const {
    return dims_ == o.dims_ && res_ == o.res_ && (origin_ - o.origin_).norm() < 1e-12;
  }

  friend VoxelGrid build_voxel_grid(const PointCloud&, double, const Aabb&);
  friend VoxelGrid build_cspace_grid(const PointCloud&, double, double, const Aabb&);
  friend VoxelGrid inflate_grid(const VoxelGrid&, double);
  friend VoxelGrid add_points_cspace(const VoxelGrid&, const PointCloud&, double);
  friend VoxelGrid add_points_raw(const VoxelGrid&, const PointCloud&);

 private:
  Vec3 origin_{Vec3::Zero()};
  double res_{0.1};
  Vec3i dims_{Vec3i::Ones()};
  bool outside_occupied_{true};
  std::vector<std::uint8_t> occ_;
};

// A cell is occupied iff at least one cloud point falls in it. Points outside
// the bounds are ignored; non-finite points are rejected.
VoxelGrid build_voxel_grid(const PointCloud& cloud, double resolution, const Aabb& bounds);

// Configuration-space grid: a cell is occupied iff some cloud point lies
// within `radius` of the cell center (or inside the cell itself). Distances
// are point-exact, avoiding the double quantization of voxelize-then-dilate.
VoxelGrid build_cspace_grid(const PointCloud& cloud, double resolution, double radius,
                            const Aabb& bounds);

// Morphological dilation over cell centers: an output cell is occupied iff
// some input occupied cell center lies within Euclidean `radius` of its own
// center. radius = 0 is the identity.
VoxelGrid inflate_grid(const VoxelGrid& grid, double radius);

// New grid versions with additional points stamped in; the input grid is not
// modified. Used for incremental map accumulation across replan steps.
VoxelGrid add_points_cspace(const VoxelGrid& grid, const PointCloud& pts, double radius);
VoxelGrid add_points_raw(const VoxelGrid& grid, const PointCloud& pts);

// Earliest point along p0->p1 whose cell is occupied, by exact cell traversal.
// std::nullopt if the whole segment is free.
std::optional<Vec3> segment_first_collision(const VoxelGrid& grid, const Vec3& p0,
                                            const Vec3& p1);

// Occupied cell center minimizing Euclidean distance to p, if within d_max.
// Ties broken by lexicographic cell index.
std::optional<Vec3> nearest_occupied_within(const VoxelGrid& grid, const Vec3& p,
                                            double d_max);

}  // namespace mrplan
