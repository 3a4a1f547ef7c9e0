#include "mrplan/sim.hpp"

#include <cmath>

#include "mrplan/errors.hpp"
#include "mrplan/flatness.hpp"

namespace mrplan {

SimSession::SimSession(PointCloud world, Aabb bounds, FlatState start, FlatState goal,
                       const DroneModel& drone, PlannerParams params, SimConfig cfg)
    : world_(std::move(world)),
      revealed_(world_.size(), false),
      bounds_(bounds),
      goal_(goal),
      drone_(drone),
      params_(std::move(params)),
      cfg_(cfg),
      vehicle_(start) {
  map_ = DualResMap::build(PointCloud{}, drone_, bounds_);
  sense_and_update();
  const StepResult first = replan("initial");
  if (first.failed) {
    failed_ = true;
  }
  executed_.push_back(vehicle_.p);
}

bool SimSession::sense_and_update() {
  PointCloud fresh;
  const double r2 = cfg_.sensor_radius * cfg_.sensor_radius;
  for (std::size_t i = 0; i < world_.points.size(); ++i) {
    if (revealed_[i]) continue;
    if ((world_.points[i] - vehicle_.p).squaredNorm() <= r2) {
      revealed_[i] = true;
      fresh.points.push_back(world_.points[i]);
    }
  }
  if (fresh.empty()) return false;
  known_.append(fresh);
  map_ = map_.extended(fresh);
  last_fresh_ = std::move(fresh);
  return true;
}

bool SimSession::plan_invaded_by(const PointCloud& fresh) const {
  if (!plan_) return false;
  const double cursor = std::clamp(sim_time_ - plan_t0_, 0.0, plan_->full.total_duration());
  // Pieces not yet fully executed.
  double t_acc = 0.0;
  for (const auto& piece : plan_->pieces) {
    const double t_end = t_acc + piece.traj.total_duration();
    if (t_end >= cursor) {
      for (const auto& poly : piece.corridor.polys) {
        for (const auto& p : fresh.points) {
          if (poly_contains(poly, p, drone_.r)) return true;
        }
      }
    }
    t_acc = t_end;
  }
  return false;
}

double SimSession::remaining_plan_distance() const {
  if (!plan_) return 0.0;
  const double total = plan_->full.total_duration();
  const double cursor = std::clamp(sim_time_ - plan_t0_, 0.0, total);
  double len = 0.0;
  Vec3 prev = plan_->full.eval(cursor, 0);
  for (double t = cursor + 1e-2; t < total + 1e-2; t += 1e-2) {
    const Vec3 p = plan_->full.eval(std::min(t, total), 0);
    len += (p - prev).norm();
    prev = p;
  }
  return len;
}

SimSession::StepResult SimSession::replan(const std::string& why) {
  StepResult res;
  FlatState target = goal_;
  plan_reaches_goal_ = true;

  const double D = params_.horizon;
  if (plan_) {
    // Clip the goal to distance D along the previous plan.
    const double total = plan_->full.total_duration();
    const double cursor = std::clamp(sim_time_ - plan_t0_, 0.0, total);
    double len = 0.0;
    Vec3 prev = plan_->full.eval(cursor, 0);
    double t_clip = total;
    for (double t = cursor + 1e-2; t < total; t += 1e-2) {
      const Vec3 p = plan_->full.eval(t, 0);
      len += (p - prev).norm();
      prev = p;
      if (len >= D) {
        t_clip = t;
        break;
      }
    }
    if (t_clip < total) {
      target = plan_->full.state(t_clip);
      plan_reaches_goal_ = false;
    }
  } else if ((goal_.p - vehicle_.p).norm() > D) {
    const Vec3 dir = (goal_.p - vehicle_.p).normalized();
    target = FlatState::rest(vehicle_.p + D * dir);
    plan_reaches_goal_ = false;
  }

  PlanRequest req;
  req.start = vehicle_;
  req.goal = target;
  req.map = &map_;
  req.params = params_;

  PlanOutcome outcome = plan(req);
  if (!plan_ok(outcome)) {
    const auto& f = std::get<PlanFailure>(outcome);
    res.failed = true;
    res.reason = why + " replan failed at stage " + f.stage + ": " + f.reason;
    return res;
  }
  plan_ = std::get<PlanResult>(std::move(outcome));
  plan_t0_ = sim_time_;
  replan_times_.push_back(sim_time_);
  if (replan_times_.size() > 1) ++replans_;
  res.replanned = true;
  return res;
}

SimSession::StepResult SimSession::step(double now) {
  StepResult res;
  if (failed_) {
    res.failed = true;
    res.reason = "session already failed";
    return res;
  }
  if (reached_) {
    res.done = true;
    return res;
  }
  if (!plan_) {
    res.failed = true;
    res.reason = "no active plan";
    failed_ = true;
    return res;
  }

  // Perfect tracking along the current plan.
  sim_time_ = now;
  const double total = plan_->full.total_duration();
  const double cursor = std::clamp(sim_time_ - plan_t0_, 0.0, total);
  vehicle_ = plan_->full.state(cursor);
  executed_.push_back(vehicle_.p);

  const bool new_points = sense_and_update();

  // Simulation fault: the tracked state must stay clear of the known map.
  std::size_t piece_idx = 0;
  {
    double acc = 0.0;
    for (std::size_t i = 0; i < plan_->pieces.size(); ++i) {
      acc += plan_->pieces[i].traj.total_duration();
      if (cursor <= acc + 1e-9) {
        piece_idx = i;
        break;
      }
    }
  }
  const PlanMode mode = plan_->pieces[piece_idx].label;
  bool fault = false;
  if (mode == PlanMode::R3) {
    fault = map_.lrm.query_occupied(vehicle_.p);
  } else {
    // Ellipsoid against raw map cell centers.
    Mat3 R = Mat3::Identity();
    try {
      YawTracker yaw;
      R = flat_to_rotation(vehicle_.a, yaw.update(vehicle_.v));
    } catch (const SingularityError&) {
      fault = true;
    }
    if (!fault) {
      const Mat3 Qi = Vec3(1.0 / drone_.r, 1.0 / drone_.r, 1.0 / drone_.h).asDiagonal();
      const auto& raw = map_.hrm_raw;
      const int reach = static_cast<int>(std::ceil(drone_.r / raw.resolution())) + 1;
      const Vec3i c0 = raw.cell_of(vehicle_.p);
      for (int dz = -reach; dz <= reach && !fault; ++dz) {
        for (int dy = -reach; dy <= reach && !fault; ++dy) {
          for (int dx = -reach; dx <= reach && !fault; ++dx) {
            const Vec3i c = c0 + Vec3i(dx, dy, dz);
            if (!raw.in_bounds(c) || !raw.occupied_in_bounds(c)) continue;
            const Vec3 body = Qi * (R.transpose() * (raw.cell_center(c) - vehicle_.p));
            if (body.squaredNorm() < 1.0) fault = true;
          }
        }
      }
    }
  }
  if (fault) {
    failed_ = true;
    res.failed = true;
    res.reason = "vehicle state entered newly known occupied space";
    return res;
  }

  // Goal reached?
  if (plan_reaches_goal_ && cursor >= total - 1e-9) {
    reached_ = true;
    res.done = true;
    return res;
  }

  // Replan triggers: corridor invasion by fresh points, or short remaining
  // validated distance on a clipped plan.
  if (new_points && plan_invaded_by(last_fresh_)) {
    const StepResult r = replan("collision");
    if (r.failed) {
      failed_ = true;
      return r;
    }
    res.replanned = true;
    return res;
  }
  if (!plan_reaches_goal_ && remaining_plan_distance() < params_.horizon * cfg_.trigger_fraction) {
    const StepResult r = replan("horizon");
    if (r.failed) {
      failed_ = true;
      return r;
    }
    res.replanned = true;
  }
  return res;
}

SimSession::StepResult SimSession::run(double max_time) {
  StepResult res;
  double t = 0.0;
  while (t < max_time) {
    t += cfg_.step_dt;
    res = step(t);
    if (res.done || res.failed) return res;
  }
  res.failed = true;
  res.reason = "simulation timed out";
  failed_ = true;
  return res;
}

}  // namespace mrplan
