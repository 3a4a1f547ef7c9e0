#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mrplan/dual_map.hpp"
#include "mrplan/mr_search.hpp"
#include "mrplan/optimizer.hpp"
#include "mrplan/sfc.hpp"

namespace mrplan {

struct PlannerParams {
  KinoLimits limits;
  double horizon{15.0};  // receding-horizon distance D
  std::uint64_t search_budget{200000};
  int lrs_ratio{1};
  std::uint64_t resume_budget{200000};
  double extract_dt{5e-3};
  int margin_cells{2};
  OptWeights weights;
  int samples_per_piece{16};
  double constraint_margin{5e-3};
  int max_opt_iterations{300};
  double sfc_max_box{2.0};
  NarrowCorridorParams narrow;
  double se3_runway{1.5};  // boundary-state offset from the gap midpoint
  double gap_speed{2.0};   // crossing speed, capped at v_max/2
  bool parallel_segments{true};
};

struct PlanRequest {
  FlatState start, goal;
  const DualResMap* map{nullptr};
  PlannerParams params;
};

struct PlanPiece {
  PlanMode label{PlanMode::R3};
  PiecewiseTrajectory traj;
  Corridor corridor;
};

struct StageTimings {
  double global_ms{0.0}, extract_ms{0.0}, search_ms{0.0}, se3_ms{0.0}, r3_ms{0.0},
      validate_ms{0.0}, total_ms{0.0};
};

// Final classification per extracted colliding segment.
enum class SegmentClass { R3Direct, R3Detour, SE3 };

struct PlanResult {
  std::vector<PlanPiece> pieces;
  PiecewiseTrajectory full;
  std::vector<SegmentClass> segments;
  StageTimings timings;
  double length{0.0};
};

struct PlanFailure {
  std::string stage;
  int segment{-1};
  std::string reason;
};

using PlanOutcome = std::variant<PlanResult, PlanFailure>;

inline bool plan_ok(const PlanOutcome& o) { return std::holds_alternative<PlanResult>(o); }

// Full pipeline: global boundary-value trajectory, colliding-segment
// extraction, multi-resolution classification, SE(3) solves with
// low-resolution wake-up fallback, R3 connection, stitching, validation.
PlanOutcome plan(const PlanRequest& req);

// Arclength of a trajectory by sampling.
double trajectory_length(const PiecewiseTrajectory& traj, double dt = 1e-2);

}  // namespace mrplan
