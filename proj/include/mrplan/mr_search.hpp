#pragma once

#include <memory>
#include <vector>

#include "mrplan/dual_map.hpp"
#include "mrplan/grid_search.hpp"
#include "mrplan/polynomial.hpp"

namespace mrplan {

// One maximal colliding stretch of the global trajectory, delimited by
// LRM-free entry/exit positions.
struct CollidingSegment {
  Vec3 entry, exit;
  double t_entry{0.0}, t_exit{0.0};
};

// Samples the trajectory on the low-resolution map and brackets maximal
// colliding runs. Endpoints are pushed outward to free space, runs whose free
// gap is shorter than 2*margin_cells*r are merged, then each end is extended
// by margin_cells cells of arclength. Returned in time order.
std::vector<CollidingSegment> extract_colliding_segments(const PiecewiseTrajectory& traj,
                                                         const VoxelGrid& lrm,
                                                         double dt = 5e-3,
                                                         int margin_cells = 2);

enum class MrClass { R3, SE3Candidate, Unreachable };

// Suspended low-resolution search, resumable exactly once.
struct LrsHandle {
  std::unique_ptr<GridSearch> search;
  bool consumed{false};
};

struct MrResult {
  MrClass cls{MrClass::Unreachable};
  GridPath path;  // LRM path when R3, HRM path when SE3Candidate
  std::shared_ptr<LrsHandle> lrs;  // present iff SE3Candidate
  std::uint64_t lrs_expansions{0}, hrs_expansions{0};
};

// Deterministic interleaved race between a low-resolution and a
// high-resolution A*: `ratio` LRS expansions per one HRS expansion per round,
// LRS wins ties. `budget` caps total expansions across both searches.
MrResult mr_search(const CollidingSegment& seg, const DualResMap& map, int ratio = 1,
                   std::uint64_t budget = 200000);

// Continues the suspended search with its open/closed sets intact.
AstarResult resume_lrs(LrsHandle& handle, std::uint64_t extra_budget);

}  // namespace mrplan
