#include "mrplan/config_io.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {

template <typename T>
void get(const YAML::Node& node, const char* key, T& target) {
  if (node && node[key]) target = node[key].as<T>();
}

void get_vec3(const YAML::Node& node, const char* key, Vec3& target) {
  if (node && node[key]) {
    const auto v = node[key].as<std::vector<double>>();
    if (v.size() != 3) throw ConfigError(std::string("expected 3 values for ") + key);
    target = Vec3(v[0], v[1], v[2]);
  }
}

void parse_limits(const YAML::Node& node, KinoLimits& lim) {
  get(node, "v_max", lim.v_max);
  get(node, "a_max", lim.a_max);
  get(node, "j_max", lim.j_max);
}

RunConfig parse(const YAML::Node& root) {
  RunConfig cfg;

  if (const auto d = root["drone"]) {
    double r = cfg.drone.r, h = cfg.drone.h;
    get(d, "r", r);
    get(d, "h", h);
    cfg.drone = DroneModel(r, h);
  }
  if (const auto l = root["limits"]) parse_limits(l, cfg.planner.limits);
  if (const auto p = root["planner"]) {
    get(p, "horizon", cfg.planner.horizon);
    get(p, "search_budget", cfg.planner.search_budget);
    get(p, "lrs_ratio", cfg.planner.lrs_ratio);
    get(p, "resume_budget", cfg.planner.resume_budget);
    get(p, "extract_dt", cfg.planner.extract_dt);
    get(p, "margin_cells", cfg.planner.margin_cells);
    get(p, "samples_per_piece", cfg.planner.samples_per_piece);
    get(p, "constraint_margin", cfg.planner.constraint_margin);
    get(p, "max_opt_iterations", cfg.planner.max_opt_iterations);
    get(p, "sfc_max_box", cfg.planner.sfc_max_box);
    get(p, "se3_runway", cfg.planner.se3_runway);
    get(p, "gap_speed", cfg.planner.gap_speed);
    get(p, "parallel_segments", cfg.planner.parallel_segments);
    if (const auto w = p["weights"]) {
      get(w, "smooth", cfg.planner.weights.smooth);
      get(w, "time", cfg.planner.weights.time);
      get(w, "penalty", cfg.planner.weights.penalty);
    }
  }
  if (const auto m = root["maze"]) {
    get_vec3(m, "room_min", cfg.maze.room.min);
    get_vec3(m, "room_max", cfg.maze.room.max);
    get(m, "wall_count", cfg.maze.wall_count);
    get(m, "wall_thickness", cfg.maze.wall_thickness);
    get(m, "first_wall_x", cfg.maze.first_wall_x);
    get(m, "wall_spacing", cfg.maze.wall_spacing);
    get(m, "point_spacing", cfg.maze.point_spacing);
    get(m, "snap", cfg.maze.snap);
    get(m, "gap_margin", cfg.maze.gap_margin);
    if (const auto gaps = m["gaps"]) {
      cfg.maze.gaps.clear();
      for (const auto g : gaps) {
        GapClass gc;
        if (g["width"]) {
          const auto w = g["width"].as<std::vector<double>>();
          if (w.size() != 2) throw ConfigError("gap width must be [min, max]");
          gc.width_min = w[0];
          gc.width_max = w[1];
        }
        if (g["height"]) {
          const auto h = g["height"].as<std::vector<double>>();
          if (h.size() != 2) throw ConfigError("gap height must be [min, max]");
          gc.height_min = h[0];
          gc.height_max = h[1];
        }
        get(g, "weight", gc.weight);
        cfg.maze.gaps.push_back(gc);
      }
      if (cfg.maze.gaps.empty()) throw ConfigError("maze.gaps must not be empty");
    }
  }
  if (const auto s = root["sim"]) {
    get(s, "sensor_radius", cfg.sim.sensor_radius);
    get(s, "step_dt", cfg.sim.step_dt);
    get(s, "trigger_fraction", cfg.sim.trigger_fraction);
  }
  if (const auto b = root["bench"]) {
    get(b, "wall_counts", cfg.bench.wall_counts);
    get(b, "seeds_per_count", cfg.bench.seeds_per_count);
    get(b, "seed_base", cfg.bench.seed_base);
    get(b, "out_dir", cfg.bench.out_dir);
  }

  // The benchmark inherits the shared sections.
  cfg.bench.maze = cfg.maze;
  cfg.bench.drone = cfg.drone;
  cfg.bench.planner = cfg.planner;
  cfg.maze.snap = cfg.drone.h;
  cfg.bench.maze.snap = cfg.drone.h;
  return cfg;
}

}  // namespace

RunConfig parse_run_config(const std::string& yaml_text) {
  try {
    return parse(YAML::Load(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("yaml parse error: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& yaml_path) {
  std::ifstream in(yaml_path);
  if (!in) throw ConfigError("cannot open config file: " + yaml_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace mrplan
