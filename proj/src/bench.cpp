#include "mrplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "mrplan/errors.hpp"
#include "mrplan/export.hpp"
#include "mrplan/sim.hpp"
#include "mrplan/validate.hpp"

namespace mrplan {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

bool plan_validated(const PlanResult& result, const DroneModel& drone,
                    const KinoLimits& limits) {
  if (result.pieces.empty()) return false;
  for (const auto& piece : result.pieces) {
    const auto rep =
        validate_trajectory(piece.traj, piece.corridor, drone, piece.label, limits, 1e-3);
    if (!rep.pass) return false;
  }
  return true;
}

std::vector<RunRecord> run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.seeds_per_count < 1) throw ConfigError("seeds_per_count must be >= 1");

  std::vector<RunRecord> records;
  for (const int count : cfg.wall_counts) {
    for (int s = 0; s < cfg.seeds_per_count; ++s) {
      const std::uint64_t seed = cfg.seed_base + static_cast<std::uint64_t>(s);
      RunRecord rec;
      rec.wall_count = count;
      rec.seed = seed;
      rec.failure_stage = "-";

      MazeConfig maze = cfg.maze;
      maze.wall_count = count;
      const PointCloud cloud = generate_maze(maze, seed);
      const DualResMap map = DualResMap::build(cloud, cfg.drone, maze.room);

      const Vec3 mid(0.0, 0.5 * (maze.room.min.y() + maze.room.max.y()),
                     0.5 * (maze.room.min.z() + maze.room.max.z()));
      PlanRequest req;
      req.start = FlatState::rest(Vec3(maze.room.min.x() + 1.0, mid.y(), mid.z()));
      req.goal = FlatState::rest(Vec3(maze.room.max.x() - 1.0, mid.y(), mid.z()));
      req.map = &map;
      req.params = cfg.planner;

      const auto t0 = Clock::now();
      const PlanOutcome outcome = plan(req);
      rec.plan_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

      if (plan_ok(outcome)) {
        const auto& res = std::get<PlanResult>(outcome);
        rec.success = plan_validated(res, cfg.drone, cfg.planner.limits);
        rec.length_m = res.length;
        rec.exec_s = res.full.total_duration();
        if (!rec.success) rec.failure_stage = "validate";
      } else {
        const auto& f = std::get<PlanFailure>(outcome);
        rec.failure_stage = f.stage;
      }
      records.push_back(rec);
    }
  }

  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output dir: " + cfg.out_dir);
    write_text_file(cfg.out_dir + "/runs.csv", runs_csv(records));
    write_text_file(cfg.out_dir + "/summary.csv", summary_csv(records));
    write_text_file(cfg.out_dir + "/timings.csv", timings_csv(records));
  }
  return records;
}

std::string runs_csv(const std::vector<RunRecord>& records) {
  std::string out = "wall_count,seed,success,length_m,exec_s,failure_stage\n";
  for (const auto& r : records) {
    out += std::to_string(r.wall_count) + "," + std::to_string(r.seed) + "," +
           (r.success ? "1" : "0") + "," + fmt(r.length_m) + "," + fmt(r.exec_s) + "," +
           r.failure_stage + "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<RunRecord>& records) {
  std::string out = "wall_count,successes,runs,success_rate\n";
  std::vector<int> counts;
  for (const auto& r : records) {
    if (std::find(counts.begin(), counts.end(), r.wall_count) == counts.end()) {
      counts.push_back(r.wall_count);
    }
  }
  std::sort(counts.begin(), counts.end());
  for (const int c : counts) {
    int total = 0, ok = 0;
    for (const auto& r : records) {
      if (r.wall_count != c) continue;
      ++total;
      ok += r.success ? 1 : 0;
    }
    out += std::to_string(c) + "," + std::to_string(ok) + "," + std::to_string(total) + "," +
           fmt(total > 0 ? double(ok) / total : 0.0) + "\n";
  }
  return out;
}

std::string timings_csv(const std::vector<RunRecord>& records) {
  std::string out = "wall_count,seed,plan_ms\n";
  for (const auto& r : records) {
    out += std::to_string(r.wall_count) + "," + std::to_string(r.seed) + "," +
           fmt(r.plan_ms) + "\n";
  }
  return out;
}

ScenarioSummary run_scenario(const ScenarioSpec& spec, const RunConfig& cfg) {
  ScenarioSummary sum;
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) throw IoError("cannot create output dir: " + spec.out_dir);

  nlohmann::json extra;

  if (!spec.receding) {
    const DualResMap map = DualResMap::build(spec.world, cfg.drone, spec.bounds);
    PlanRequest req;
    req.start = spec.start;
    req.goal = spec.goal;
    req.map = &map;
    req.params = cfg.planner;

    const auto t0 = Clock::now();
    const PlanOutcome outcome = plan(req);
    sum.plan_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    if (!plan_ok(outcome)) {
      const auto& f = std::get<PlanFailure>(outcome);
      sum.failure = "stage " + f.stage + ": " + f.reason;
      write_text_file(spec.out_dir + "/summary.json",
                      nlohmann::json({{"success", false}, {"failure", sum.failure}}).dump(2));
      return sum;
    }
    const auto& res = std::get<PlanResult>(outcome);
    sum.success = plan_validated(res, cfg.drone, cfg.planner.limits);
    sum.length_m = res.length;

    write_trajectory_csv(res.full, spec.out_dir + "/trajectory.csv");
    Corridor all;
    for (const auto& p : res.pieces) {
      all.polys.insert(all.polys.end(), p.corridor.polys.begin(), p.corridor.polys.end());
    }
    write_text_file(spec.out_dir + "/corridor.json", corridor_to_json(all));
    write_corridor_obj(all, spec.out_dir + "/corridor.obj");
    nlohmann::json summary = nlohmann::json::parse(plan_summary_json(res));
    summary["success"] = sum.success;
    write_text_file(spec.out_dir + "/summary.json", summary.dump(2));
    return sum;
  }

  // Receding-horizon mode.
  SimConfig sim_cfg = cfg.sim;
  SimSession session(spec.world, spec.bounds, spec.start, spec.goal, cfg.drone, cfg.planner,
                     sim_cfg);
  int snapshot = 0;
  write_ply(session.known_cloud(), spec.out_dir + "/known_" + std::to_string(snapshot) + ".ply");

  const auto t0 = Clock::now();
  double t = 0.0;
  SimSession::StepResult last;
  while (t < 600.0) {
    t += sim_cfg.step_dt;
    last = session.step(t);
    if (last.replanned) {
      ++snapshot;
      write_ply(session.known_cloud(),
                spec.out_dir + "/known_" + std::to_string(snapshot) + ".ply");
    }
    if (last.done || last.failed) break;
  }
  sum.plan_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  sum.success = session.reached_goal();
  sum.replans = session.replan_count();
  if (!sum.success) sum.failure = last.reason.empty() ? "timeout" : last.reason;

  if (session.current_plan()) {
    const auto& res = *session.current_plan();
    write_trajectory_csv(res.full, spec.out_dir + "/trajectory.csv");
    Corridor all;
    for (const auto& p : res.pieces) {
      all.polys.insert(all.polys.end(), p.corridor.polys.begin(), p.corridor.polys.end());
    }
    write_text_file(spec.out_dir + "/corridor.json", corridor_to_json(all));
    write_corridor_obj(all, spec.out_dir + "/corridor.obj");
    sum.length_m = res.length;
  }
  GridPath executed;
  executed.waypoints = session.executed_positions();
  write_path_csv(executed, spec.out_dir + "/executed_path.csv");

  nlohmann::json summary;
  summary["success"] = sum.success;
  summary["replans"] = sum.replans;
  summary["sim_time_s"] = session.time();
  summary["wall_ms"] = sum.plan_ms;
  if (!sum.success) summary["failure"] = sum.failure;
  write_text_file(spec.out_dir + "/summary.json", summary.dump(2));
  return sum;
}

}  // namespace mrplan
