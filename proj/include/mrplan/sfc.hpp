#pragma once

#include <optional>

#include "mrplan/grid_search.hpp"
#include "mrplan/polyhedron.hpp"
#include "mrplan/voxel_grid.hpp"

namespace mrplan {

// Point or segment seed for polyhedron inflation (point: a == b).
struct SeedSegment {
  Vec3 a, b;
  static SeedSegment point(const Vec3& p) { return SeedSegment{p, p}; }
  static SeedSegment segment(const Vec3& p, const Vec3& q) { return SeedSegment{p, q}; }
  bool is_point() const { return (a - b).norm() < 1e-12; }
};

// Seed-grown convex free region: an axis-aligned box grown face by face until
// obstacle contact or max_box (half-extent around the seed), followed by
// corner-cutting planes through near-interior occupied cell centers, iterated
// to fixpoint. Faces and cuts sit `face_margin_cells * resolution` in front
// of the blocking cell centers:
//   0.5 (default) keeps whole blocking cells outside (raw obstacle grids);
//   0.0 places faces on blocking centers (narrow passages, RILS-style).
Polyhedron inflate_polyhedron(const SeedSegment& seed, const VoxelGrid& grid,
                              double max_box, double face_margin_cells = 0.5);

// Narrow-gap seed: direction, midpoint and length of a segment threading the
// gap, derived from the high-resolution path and the un-inflated map.
struct LineSeed {
  Vec3 dir;     // unit, follows the path direction
  Vec3 mid;
  double length{0.0};
};

// For each path waypoint, finds the nearest occupied cell within d_c = 2r and
// ray-marches opposite to it for the facing obstacle; waypoints with hits on
// both sides localize the gap. Returns nullopt when the path never passes
// between obstacles.
std::optional<LineSeed> generate_line_seed(const GridPath& path, const VoxelGrid& hrm_raw,
                                           double r);

struct NarrowCorridorParams {
  double lateral_box{2.0};   // max_box for all three polyhedra
  double seed_pushout_cells{3.0};  // P1/P3 point seeds beyond the line-seed ends
  double min_overlap{0.1};   // inscribed-ball radius between neighbors (= h)
};

// Three-polyhedron corridor through a narrow gap: P2 grown from the line
// seed, P1/P3 from point seeds pushed out along -/+ dir so they flare into
// the open space on both sides. P2 is capped along dir so the attitude
// constraint only binds near the gap itself.
Corridor narrow_gap_corridor(const LineSeed& seed, const VoxelGrid& hrm_raw,
                             const DroneModel& drone,
                             const NarrowCorridorParams& params = {});

struct SfcParams {
  double max_box{2.0};
  double face_margin_cells{0.5};
  double min_overlap{0.1};
  std::size_t max_polyhedra{64};
};

// Greedy corridor cover of a grid path: inflate at the path start, advance to
// the last covered waypoint, re-seed with the outgoing segment, repeat.
Corridor sfc_along_path(const GridPath& path, const VoxelGrid& grid,
                        const SfcParams& params = {});

}  // namespace mrplan
