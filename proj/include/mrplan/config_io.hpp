#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrplan/maze.hpp"
#include "mrplan/planner.hpp"
#include "mrplan/sim.hpp"

namespace mrplan {

struct BenchmarkConfig {
  std::vector<int> wall_counts{1, 2, 3, 4, 5};
  int seeds_per_count{10};
  std::uint64_t seed_base{1};
  MazeConfig maze;
  DroneModel drone;
  PlannerParams planner;
  std::string out_dir{"bench_out"};
};

// Everything a CLI run needs, loadable from one YAML file. Missing keys keep
// their defaults; unknown keys are ignored.
struct RunConfig {
  DroneModel drone;
  PlannerParams planner;
  MazeConfig maze;
  SimConfig sim;
  BenchmarkConfig bench;
};

RunConfig load_run_config(const std::string& yaml_path);
RunConfig parse_run_config(const std::string& yaml_text);

}  // namespace mrplan
