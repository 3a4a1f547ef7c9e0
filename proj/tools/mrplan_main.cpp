#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mrplan/bench.hpp"
#include "mrplan/config_io.hpp"
#include "mrplan/errors.hpp"
#include "mrplan/export.hpp"
#include "mrplan/maze.hpp"
#include "mrplan/point_cloud.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanFailure = 1;
constexpr int kExitConfig = 2;

mrplan::Vec3 parse_triple(const std::string& s) {
  mrplan::Vec3 v;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x(), &v.y(), &v.z()) != 3) {
    throw mrplan::ConfigError("expected x,y,z triple, got: " + s);
  }
  return v;
}

struct CommonArgs {
  std::string config_path;
  std::string world_path;
  bool use_maze{false};
  std::uint64_t seed{1};
  std::string out_dir{"out"};
  std::string start_str, goal_str;
  bool debug{false};
};

mrplan::RunConfig load_cfg(const CommonArgs& args) {
  if (args.config_path.empty()) return mrplan::RunConfig{};
  return mrplan::load_run_config(args.config_path);
}

// World + bounds + default endpoints (1 m inside the room at mid-height).
struct WorldSetup {
  mrplan::PointCloud cloud;
  mrplan::Aabb bounds;
  mrplan::FlatState start, goal;
};

WorldSetup setup_world(const CommonArgs& args, const mrplan::RunConfig& cfg) {
  WorldSetup w;
  if (args.use_maze) {
    w.cloud = mrplan::generate_maze(cfg.maze, args.seed);
    w.bounds = cfg.maze.room;
  } else {
    if (args.world_path.empty()) {
      throw mrplan::ConfigError("need --world <ply> or --maze");
    }
    w.cloud = mrplan::read_ply(args.world_path);
    w.bounds = w.cloud.bounding_box();
    w.bounds.min -= mrplan::Vec3::Constant(1.0);
    w.bounds.max += mrplan::Vec3::Constant(1.0);
  }
  const mrplan::Vec3 mid(0.0, 0.5 * (w.bounds.min.y() + w.bounds.max.y()),
                         0.5 * (w.bounds.min.z() + w.bounds.max.z()));
  w.start = mrplan::FlatState::rest(
      mrplan::Vec3(w.bounds.min.x() + 1.0, mid.y(), mid.z()));
  w.goal = mrplan::FlatState::rest(
      mrplan::Vec3(w.bounds.max.x() - 1.0, mid.y(), mid.z()));
  if (!args.start_str.empty()) w.start = mrplan::FlatState::rest(parse_triple(args.start_str));
  if (!args.goal_str.empty()) w.goal = mrplan::FlatState::rest(parse_triple(args.goal_str));
  return w;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_world) {
  cmd->add_option("--config", args.config_path, "YAML config file");
  cmd->add_option("--seed", args.seed, "random seed");
  cmd->add_option("--out", args.out_dir, "output directory");
  if (with_world) {
    cmd->add_option("--world", args.world_path, "world point cloud (ascii PLY)");
    cmd->add_flag("--maze", args.use_maze, "generate the world from the maze config");
    cmd->add_option("--start", args.start_str, "start position x,y,z");
    cmd->add_option("--goal", args.goal_str, "goal position x,y,z");
    cmd->add_flag("--debug", args.debug, "write debug traces");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical whole-body quadrotor motion planning toolkit"};
  app.require_subcommand(1);

  CommonArgs gen_args, plan_args, bench_args, sim_args;
  std::string gen_out = "maze.ply";

  auto* gen = app.add_subcommand("gen-maze", "generate a seeded maze point cloud");
  add_common(gen, gen_args, false);
  gen->add_option("--out-ply", gen_out, "output PLY path");

  auto* planc = app.add_subcommand("plan", "single-shot plan on a known world");
  add_common(planc, plan_args, true);

  auto* benchc = app.add_subcommand("bench", "seeded maze benchmark sweep");
  add_common(benchc, bench_args, false);

  auto* simc = app.add_subcommand("sim", "receding-horizon simulation in an unknown world");
  add_common(simc, sim_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto cfg = load_cfg(gen_args);
      const auto cloud = mrplan::generate_maze(cfg.maze, gen_args.seed);
      mrplan::write_ply(cloud, gen_out);
      std::cout << "wrote " << cloud.size() << " points to " << gen_out << "\n";
      return kExitOk;
    }
    if (planc->parsed() || simc->parsed()) {
      CommonArgs& args = planc->parsed() ? plan_args : sim_args;
      const auto cfg = load_cfg(args);
      const auto world = setup_world(args, cfg);

      mrplan::ScenarioSpec spec;
      spec.world = world.cloud;
      spec.bounds = world.bounds;
      spec.start = world.start;
      spec.goal = world.goal;
      spec.receding = simc->parsed();
      spec.out_dir = args.out_dir;

      const auto sum = mrplan::run_scenario(spec, cfg);
      if (!sum.success) {
        std::cerr << "plan failed: " << sum.failure << "\n";
        return kExitPlanFailure;
      }
      std::cout << (spec.receding ? "sim" : "plan") << " succeeded, artifacts in "
                << spec.out_dir << "\n";
      return kExitOk;
    }
    if (benchc->parsed()) {
      auto cfg = load_cfg(bench_args);
      cfg.bench.out_dir = bench_args.out_dir;
      cfg.bench.seed_base = bench_args.seed;
      const auto records = mrplan::run_benchmark(cfg.bench);
      int ok = 0;
      for (const auto& r : records) ok += r.success ? 1 : 0;
      std::cout << "bench: " << ok << "/" << records.size() << " runs succeeded, CSVs in "
                << cfg.bench.out_dir << "\n";
      return kExitOk;
    }
  } catch (const mrplan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mrplan::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPlanFailure;
  }
  return kExitConfig;
}
