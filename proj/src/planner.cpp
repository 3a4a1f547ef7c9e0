#include "mrplan/planner.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Polynomial piece restricted to [t_a, t_b] (binomial time re-basing).
PolyPiece subpiece(const PolyPiece& src, double t_a, double t_b) {
  PolyPiece out;
  out.duration = t_b - t_a;
  static const auto binom = [] {
    std::array<std::array<double, 8>, 8> c{};
    for (int n = 0; n < 8; ++n) {
      c[n][0] = 1.0;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0.0);
    }
    return c;
  }();
  for (int k = 0; k < 8; ++k) {
    Eigen::RowVector3d acc = Eigen::RowVector3d::Zero();
    double p = 1.0;
    for (int m = k; m < 8; ++m) {
      acc += binom[m][k] * p * src.coeffs.row(m);
      p *= t_a;
    }
    out.coeffs.row(k) = acc;
  }
  return out;
}

struct SegmentOutcome {
  bool failed{false};
  std::string stage;
  std::string reason;
  SegmentClass cls{SegmentClass::R3Direct};
  PlanPiece se3_piece;
  FlatState se3_entry, se3_exit;
};

// Walk from `target` toward `inward` until the position sits inside the
// polyhedron with the given interior slack.
std::optional<Vec3> clamp_into(const Polyhedron& poly, const Vec3& target, const Vec3& inward,
                               double slack, double step) {
  const Vec3 d = inward - target;
  const double len = d.norm();
  if (len < 1e-12) return poly_contains(poly, target, -slack) ? std::optional<Vec3>(target)
                                                              : std::nullopt;
  const Vec3 u = d / len;
  for (double s = 0.0; s <= len; s += step) {
    const Vec3 p = target + s * u;
    if (poly_contains(poly, p, -slack)) return p;
  }
  return std::nullopt;
}

SegmentOutcome process_segment(const CollidingSegment& seg, const DualResMap& map,
                               const PlannerParams& P) {
  SegmentOutcome out;
  MrResult mr;
  try {
    mr = mr_search(seg, map, P.lrs_ratio, P.search_budget);
  } catch (const std::exception& e) {
    out.failed = true;
    out.stage = "mr_search";
    out.reason = e.what();
    return out;
  }

  if (mr.cls == MrClass::R3) {
    out.cls = SegmentClass::R3Direct;
    return out;
  }
  if (mr.cls == MrClass::Unreachable) {
    out.failed = true;
    out.stage = "mr_search";
    out.reason = "segment unreachable on both maps";
    return out;
  }

  // SE(3) candidate: line seed, narrow corridor, whole-body optimization.
  std::string se3_reason;
  const DroneModel& drone = map.drone;
  bool solved = false;
  do {
    const auto seed = generate_line_seed(mr.path, map.hrm_raw, drone.r);
    if (!seed) {
      se3_reason = "no line seed along the high-resolution path";
      break;
    }
    Corridor corridor;
    try {
      NarrowCorridorParams ncp = P.narrow;
      ncp.min_overlap = drone.h;
      corridor = narrow_gap_corridor(*seed, map.hrm_raw, drone, ncp);
    } catch (const std::exception& e) {
      se3_reason = std::string("narrow corridor: ") + e.what();
      break;
    }

    const double res = map.hrm_raw.resolution();
    const double slack = drone.h + 2.0 * res;
    const auto entry = clamp_into(corridor.polys.front(), seed->mid - P.se3_runway * seed->dir,
                                  seed->mid, slack, 0.5 * res);
    const auto exit = clamp_into(corridor.polys.back(), seed->mid + P.se3_runway * seed->dir,
                                 seed->mid, slack, 0.5 * res);
    if (!entry || !exit) {
      se3_reason = "no runway inside the side polyhedra";
      break;
    }

    OptProblem prob;
    prob.corridor = corridor;
    prob.mode = PlanMode::SE3;
    prob.drone = drone;
    prob.limits = P.limits;
    prob.weights = P.weights;
    prob.samples_per_piece = P.samples_per_piece;
    prob.constraint_margin = P.constraint_margin;
    prob.max_iterations = P.max_opt_iterations;
    const double v_gap = std::min(0.5 * P.limits.v_max, P.gap_speed);
    prob.start = FlatState{*entry, v_gap * seed->dir, Vec3::Zero(), Vec3::Zero()};
    prob.goal = FlatState{*exit, v_gap * seed->dir, Vec3::Zero(), Vec3::Zero()};

    OptResult opt;
    try {
      opt = optimize_trajectory(prob);
    } catch (const std::exception& e) {
      se3_reason = std::string("se3 optimization: ") + e.what();
      break;
    }
    if (!opt.verified) {
      se3_reason = "se3 optimization failed validation";
      break;
    }
    out.cls = SegmentClass::SE3;
    out.se3_piece = PlanPiece{PlanMode::SE3, opt.traj, corridor};
    out.se3_entry = prob.start;
    out.se3_exit = prob.goal;
    solved = true;
  } while (false);
  if (solved) return out;

  // Wake the suspended low-resolution search for a detour.
  if (mr.lrs) {
    try {
      const AstarResult detour = resume_lrs(*mr.lrs, P.resume_budget);
      if (detour.status == SearchStatus::Found) {
        out.cls = SegmentClass::R3Detour;
        return out;
      }
    } catch (const std::exception&) {
    }
  }
  out.failed = true;
  out.stage = "se3";
  out.reason = se3_reason + "; low-resolution detour unavailable";
  return out;
}

struct ConnectorResult {
  bool ok{false};
  std::string stage;
  std::string reason;
  PlanPiece piece;
};

ConnectorResult r3_connect(const FlatState& from, const FlatState& to, const DualResMap& map,
                           const PlannerParams& P) {
  ConnectorResult res;
  AstarResult search;
  try {
    search = astar_grid(map.lrm, from.p, to.p, P.search_budget);
  } catch (const std::exception& e) {
    res.stage = "r3_search";
    res.reason = e.what();
    return res;
  }
  if (search.status != SearchStatus::Found) {
    res.stage = "r3_search";
    res.reason = search.status == SearchStatus::Running ? "search budget exhausted"
                                                        : "no low-resolution path";
    return res;
  }

  Corridor corridor;
  try {
    SfcParams sp;
    sp.max_box = P.sfc_max_box;
    sp.min_overlap = map.drone.h;
    corridor = sfc_along_path(search.path, map.lrm, sp);
  } catch (const std::exception& e) {
    res.stage = "r3_corridor";
    res.reason = e.what();
    return res;
  }

  OptProblem prob;
  prob.corridor = corridor;
  prob.mode = PlanMode::R3;
  prob.drone = map.drone;
  prob.limits = P.limits;
  prob.weights = P.weights;
  prob.samples_per_piece = P.samples_per_piece;
  prob.constraint_margin = P.constraint_margin;
  prob.max_iterations = P.max_opt_iterations;
  prob.start = from;
  prob.goal = to;

  OptResult opt;
  try {
    opt = optimize_trajectory(prob);
  } catch (const std::exception& e) {
    res.stage = "r3_opt";
    res.reason = e.what();
    return res;
  }
  if (!opt.verified) {
    res.stage = "r3_opt";
    res.reason = "r3 optimization failed validation";
    return res;
  }
  res.ok = true;
  res.piece = PlanPiece{PlanMode::R3, opt.traj, corridor};
  return res;
}

// Obstacle-free shortcut: reuse the global trajectory as the single R3 piece,
// split at the corridor cover boundaries for piecewise validation.
std::optional<PlanPiece> wrap_global(const PiecewiseTrajectory& global, const DualResMap& map,
                                     const PlannerParams& P) {
  const double total = global.total_duration();
  const double step_arc = map.lrm.resolution();

  GridPath polyline;
  std::vector<double> times;
  Vec3 prev = global.eval(0.0, 0);
  polyline.waypoints.push_back(prev);
  times.push_back(0.0);
  double acc = 0.0;
  for (double t = 1e-3; t < total; t += 1e-3) {
    const Vec3 p = global.eval(t, 0);
    acc += (p - prev).norm();
    prev = p;
    if (acc >= step_arc) {
      polyline.waypoints.push_back(p);
      times.push_back(t);
      acc = 0.0;
    }
  }
  polyline.waypoints.push_back(global.eval(total, 0));
  times.push_back(total);

  Corridor corridor;
  try {
    SfcParams sp;
    sp.max_box = P.sfc_max_box;
    sp.min_overlap = map.drone.h;
    corridor = sfc_along_path(polyline, map.lrm, sp);
  } catch (const std::exception&) {
    return std::nullopt;
  }

  // Assign waypoints to polyhedra in cover order and split at the switches.
  std::vector<double> splits{0.0};
  std::size_t poly_idx = 0;
  for (std::size_t i = 0; i < polyline.waypoints.size(); ++i) {
    while (poly_idx + 1 < corridor.size() &&
           !poly_contains(corridor.polys[poly_idx], polyline.waypoints[i], 1e-9)) {
      splits.push_back(times[i > 0 ? i - 1 : 0]);
      ++poly_idx;
    }
  }
  while (splits.size() < corridor.size()) splits.push_back(total);
  splits.push_back(total);

  std::vector<PolyPiece> pieces;
  const PolyPiece& src = global.pieces().front();
  for (std::size_t k = 0; k + 1 < splits.size(); ++k) {
    if (splits[k + 1] - splits[k] < 1e-6) return std::nullopt;
    pieces.push_back(subpiece(src, splits[k], splits[k + 1]));
  }
  if (pieces.size() != corridor.size()) return std::nullopt;

  PlanPiece piece{PlanMode::R3, PiecewiseTrajectory(std::move(pieces)), corridor};
  const auto rep = validate_trajectory(piece.traj, piece.corridor, map.drone, PlanMode::R3,
                                       P.limits, 1e-3);
  if (!rep.pass) return std::nullopt;
  return piece;
}

}  // namespace

double trajectory_length(const PiecewiseTrajectory& traj, double dt) {
  double len = 0.0;
  Vec3 prev = traj.eval(0.0, 0);
  const double total = traj.total_duration();
  for (double t = dt; t < total + dt; t += dt) {
    const Vec3 p = traj.eval(std::min(t, total), 0);
    len += (p - prev).norm();
    prev = p;
  }
  return len;
}

PlanOutcome plan(const PlanRequest& req) {
  const auto t_start = Clock::now();
  StageTimings tm;

  if (!req.map) return PlanFailure{"request", -1, "no map attached to the request"};
  const DualResMap& map = *req.map;
  const PlannerParams& P = req.params;
  if (!P.limits.valid()) return PlanFailure{"request", -1, "invalid kinodynamic limits"};
  if (map.lrm.query_occupied(req.start.p)) {
    return PlanFailure{"request", -1, "start position lies in LRM-occupied space"};
  }
  if (map.lrm.query_occupied(req.goal.p)) {
    return PlanFailure{"request", -1, "goal position lies in LRM-occupied space"};
  }

  // 1. Global boundary-value trajectory, obstacles ignored.
  auto t0 = Clock::now();
  PiecewiseTrajectory global;
  try {
    global = lqmt_global(req.start, req.goal, P.limits);
  } catch (const std::exception& e) {
    return PlanFailure{"global", -1, e.what()};
  }
  tm.global_ms = ms_since(t0);

  // 2. Colliding-segment extraction on the low-resolution map.
  t0 = Clock::now();
  std::vector<CollidingSegment> segments;
  try {
    segments = extract_colliding_segments(global, map.lrm, P.extract_dt, P.margin_cells);
  } catch (const std::exception& e) {
    return PlanFailure{"extract", -1, e.what()};
  }
  tm.extract_ms = ms_since(t0);

  PlanResult result;

  if (segments.empty()) {
    t0 = Clock::now();
    if (auto piece = wrap_global(global, map, P)) {
      result.pieces.push_back(std::move(*piece));
      result.full = result.pieces.front().traj;
      tm.r3_ms = ms_since(t0);
      tm.total_ms = ms_since(t_start);
      result.timings = tm;
      result.length = trajectory_length(result.full);
      return result;
    }
    tm.r3_ms += ms_since(t0);
  }

  // 3. Classify and solve each colliding segment.
  t0 = Clock::now();
  std::vector<SegmentOutcome> outcomes(segments.size());
  if (P.parallel_segments && segments.size() > 1) {
    std::vector<std::future<SegmentOutcome>> futs;
    futs.reserve(segments.size());
    for (const auto& seg : segments) {
      futs.push_back(std::async(std::launch::async,
                                [&seg, &map, &P] { return process_segment(seg, map, P); }));
    }
    for (std::size_t i = 0; i < futs.size(); ++i) outcomes[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < segments.size(); ++i) {
      outcomes[i] = process_segment(segments[i], map, P);
    }
  }
  tm.search_ms = ms_since(t0);

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].failed) {
      return PlanFailure{outcomes[i].stage, static_cast<int>(i), outcomes[i].reason};
    }
    result.segments.push_back(outcomes[i].cls);
  }

  // 4. R3 connections between the global endpoints and the SE(3) pieces,
  // boundary states imposed by the SE(3) solutions.
  t0 = Clock::now();
  std::vector<PlanPiece> pieces;
  FlatState cursor = req.start;
  for (auto& oc : outcomes) {
    if (oc.cls != SegmentClass::SE3) continue;
    const ConnectorResult conn = r3_connect(cursor, oc.se3_entry, map, P);
    if (!conn.ok) {
      return PlanFailure{conn.stage, -1, conn.reason};
    }
    pieces.push_back(conn.piece);
    pieces.push_back(std::move(oc.se3_piece));
    cursor = oc.se3_exit;
  }
  const ConnectorResult last = r3_connect(cursor, req.goal, map, P);
  if (!last.ok) return PlanFailure{last.stage, -1, last.reason};
  pieces.push_back(last.piece);
  tm.r3_ms += ms_since(t0);

  // 5. Stitch and validate end to end.
  t0 = Clock::now();
  std::vector<PiecewiseTrajectory> parts;
  parts.reserve(pieces.size());
  for (const auto& p : pieces) parts.push_back(p.traj);
  try {
    result.full = stitch(parts);
  } catch (const std::exception& e) {
    return PlanFailure{"stitch", -1, e.what()};
  }

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto rep = validate_trajectory(pieces[i].traj, pieces[i].corridor, map.drone,
                                         pieces[i].label, P.limits, 1e-3);
    if (!rep.pass) {
      return PlanFailure{"validate", static_cast<int>(i),
                         "piece failed final validation: " + rep.reason};
    }
  }
  tm.validate_ms = ms_since(t0);

  result.pieces = std::move(pieces);
  result.length = trajectory_length(result.full);
  tm.total_ms = ms_since(t_start);
  result.timings = tm;
  return result;
}

}  // namespace mrplan
