#pragma once

#include <string>
#include <vector>

#include "mrplan/config_io.hpp"
#include "mrplan/planner.hpp"

namespace mrplan {

struct RunRecord {
  int wall_count{0};
  std::uint64_t seed{0};
  bool success{false};
  double plan_ms{0.0};
  double length_m{0.0};
  double exec_s{0.0};
  std::string failure_stage;  // "-" when none
};

// Success accounting for benchmark runs: re-validates every piece with the
// independent validator. Optimizer/niceness flags carried by the result are
// deliberately ignored.
bool plan_validated(const PlanResult& result, const DroneModel& drone,
                    const KinoLimits& limits);

// One maze plan per (wall count, seed): generate, build maps, plan from 1 m
// inside the room on one side of the wall stack to 1 m inside on the other,
// validate, record. Writes runs.csv / summary.csv (deterministic) and
// timings.csv (wall-clock) into cfg.out_dir.
std::vector<RunRecord> run_benchmark(const BenchmarkConfig& cfg);

// Deterministic CSV bodies, exposed so reruns can be compared byte-for-byte.
std::string runs_csv(const std::vector<RunRecord>& records);
std::string summary_csv(const std::vector<RunRecord>& records);
std::string timings_csv(const std::vector<RunRecord>& records);

struct ScenarioSpec {
  PointCloud world;
  Aabb bounds;
  FlatState start, goal;
  bool receding{false};
  std::string out_dir{"scenario_out"};
};

struct ScenarioSummary {
  bool success{false};
  int replans{0};
  double plan_ms{0.0};
  double length_m{0.0};
  std::string failure;
};

// Executes a single-shot plan or a receding-horizon session and writes the
// trajectory CSV, corridor JSON/OBJ, per-replan known-map PLY snapshots and a
// summary JSON into spec.out_dir.
ScenarioSummary run_scenario(const ScenarioSpec& spec, const RunConfig& cfg);

}  // namespace mrplan
