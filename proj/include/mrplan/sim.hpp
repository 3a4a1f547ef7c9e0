#pragma once

#include <optional>

#include "mrplan/planner.hpp"

namespace mrplan {

struct SimConfig {
  double sensor_radius{15.0};  // omnidirectional, defaults to the horizon D
  double step_dt{0.05};        // simulated advance per replan_step call
  double trigger_fraction{1.0 / 3.0};  // replan when remaining distance < D * fraction
};

// Distance-triggered receding-horizon session over a progressively revealed
// world. The vehicle tracks the current plan perfectly; sensing accumulates
// into a fresh map version; replans fire when the remaining validated plan
// gets short or newly sensed obstacles invade the current corridors.
class SimSession {
 public:
  SimSession(PointCloud world, Aabb bounds, FlatState start, FlatState goal,
             const DroneModel& drone, PlannerParams params, SimConfig cfg);

  struct StepResult {
    bool replanned{false};
    bool done{false};
    bool failed{false};
    std::string reason;
  };

  // Advance the simulated clock to `now`, sense, and replan when triggered.
  StepResult step(double now);

  // Convenience loop: run until the goal is reached or the run fails.
  StepResult run(double max_time = 600.0);

  double time() const { return sim_time_; }
  const FlatState& vehicle() const { return vehicle_; }
  const DualResMap& map() const { return map_; }
  const PointCloud& known_cloud() const { return known_; }
  int replan_count() const { return replans_; }
  const std::vector<double>& replan_times() const { return replan_times_; }
  const std::vector<Vec3>& executed_positions() const { return executed_; }
  const std::optional<PlanResult>& current_plan() const { return plan_; }
  bool reached_goal() const { return reached_; }

 private:
  bool sense_and_update();  // returns true when new points appeared
  StepResult replan(const std::string& why);
  bool plan_invaded_by(const PointCloud& fresh) const;
  double remaining_plan_distance() const;

  PointCloud world_;
  std::vector<bool> revealed_;
  PointCloud known_;
  PointCloud last_fresh_;
  Aabb bounds_;
  FlatState goal_;
  DroneModel drone_;
  PlannerParams params_;
  SimConfig cfg_;

  DualResMap map_;
  std::optional<PlanResult> plan_;
  bool plan_reaches_goal_{false};
  double plan_t0_{0.0};
  double sim_time_{0.0};
  FlatState vehicle_;
  bool reached_{false};
  bool failed_{false};
  int replans_{0};
  std::vector<double> replan_times_;
  std::vector<Vec3> executed_;
};

}  // namespace mrplan
