#include "mrplan/maze.hpp"

#include <cmath>
#include <random>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {

// Uniform double in [0, 1) derived directly from the engine output, so the
// stream does not depend on libstdc++ distribution internals.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

void validate(const MazeConfig& cfg) {
  if (cfg.wall_count < 1 || cfg.wall_count > 10) {
    throw ConfigError("maze wall count must be in 1..10");
  }
  if (cfg.room.empty()) throw ConfigError("maze room box is empty");
  if (!(cfg.point_spacing > 0.0) || !(cfg.wall_thickness > 0.0) || !(cfg.snap > 0.0)) {
    throw ConfigError("maze spacings must be > 0");
  }
  if (cfg.gaps.empty()) throw ConfigError("maze needs at least one gap class");
  const double wy = cfg.room.extent().y();
  const double wz = cfg.room.extent().z();
  for (const auto& g : cfg.gaps) {
    if (!(g.width_min > 0.0) || g.width_max < g.width_min || !(g.height_min > 0.0) ||
        g.height_max < g.height_min || !(g.weight > 0.0)) {
      throw ConfigError("invalid gap class ranges");
    }
    if (g.width_max + 2.0 * cfg.gap_margin > wy || g.height_max + 2.0 * cfg.gap_margin > wz) {
      throw ConfigError("gap larger than wall cross-section");
    }
  }
  const double last_x = cfg.first_wall_x + (cfg.wall_count - 1) * cfg.wall_spacing;
  if (cfg.first_wall_x - cfg.wall_thickness / 2 <= cfg.room.min.x() ||
      last_x + cfg.wall_thickness / 2 >= cfg.room.max.x()) {
    throw ConfigError("walls do not fit inside the room along x");
  }
}

}  // namespace

std::vector<GapInfo> maze_gaps(const MazeConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  std::mt19937_64 rng(seed);
  std::vector<GapInfo> gaps;
  gaps.reserve(cfg.wall_count);

  double total_w = 0.0;
  for (const auto& g : cfg.gaps) total_w += g.weight;

  for (int i = 0; i < cfg.wall_count; ++i) {
    const double x = cfg.first_wall_x + i * cfg.wall_spacing;

    // Pick the gap class by weight, then its size and seeded center.
    double pick = uniform01(rng) * total_w;
    const GapClass* cls = &cfg.gaps.back();
    for (const auto& g : cfg.gaps) {
      if (pick < g.weight) {
        cls = &g;
        break;
      }
      pick -= g.weight;
    }
    const double w = uniform(rng, cls->width_min, cls->width_max);
    const double gh = uniform(rng, cls->height_min, cls->height_max);

    const double y_lo = cfg.room.min.y() + cfg.gap_margin + w / 2;
    const double y_hi = cfg.room.max.y() - cfg.gap_margin - w / 2;
    const double z_lo = cfg.room.min.z() + cfg.gap_margin + gh / 2;
    const double z_hi = cfg.room.max.z() - cfg.gap_margin - gh / 2;
    double cy = uniform(rng, y_lo, y_hi);
    double cz = uniform(rng, z_lo, z_hi);
    // Snap the gap center onto the map cell lattice; gap widths stay
    // continuous, so difficulty is governed by width rather than alignment.
    cy = cfg.room.min.y() + cfg.snap * std::round((cy - cfg.room.min.y()) / cfg.snap);
    cz = cfg.room.min.z() + cfg.snap * std::round((cz - cfg.room.min.z()) / cfg.snap);

    gaps.push_back(GapInfo{x, cy, cz, w, gh});
  }
  return gaps;
}

PointCloud generate_maze(const MazeConfig& cfg, std::uint64_t seed) {
  const auto gaps = maze_gaps(cfg, seed);
  PointCloud cloud;

  const double s = cfg.point_spacing;
  const double y0 = cfg.room.min.y(), y1 = cfg.room.max.y();
  const double z0 = cfg.room.min.z(), z1 = cfg.room.max.z();

  for (const auto& g : gaps) {
    // Sampling lattices anchored at the gap edges so no gap is aliased away.
    std::vector<double> ys, zs;
    const double gy0 = g.cy - g.width / 2, gy1 = g.cy + g.width / 2;
    const double gz0 = g.cz - g.height / 2, gz1 = g.cz + g.height / 2;
    for (double y = gy0; y >= y0; y -= s) ys.push_back(y);
    for (double y = gy0 + s; y < gy1; y += s) ys.push_back(y);
    for (double y = gy1; y <= y1; y += s) ys.push_back(y);
    for (double z = gz0; z >= z0; z -= s) zs.push_back(z);
    for (double z = gz0 + s; z < gz1; z += s) zs.push_back(z);
    for (double z = gz1; z <= z1; z += s) zs.push_back(z);

    const int half_layers = static_cast<int>(std::floor(cfg.wall_thickness / 2 / s + 1e-9));
    for (int m = -half_layers; m <= half_layers; ++m) {
      const double x = g.wall_x + m * s;
      for (double y : ys) {
        const bool y_in = (y > gy0 && y < gy1);
        for (double z : zs) {
          const bool z_in = (z > gz0 && z < gz1);
          if (y_in && z_in) continue;  // gap interior stays empty
          cloud.points.emplace_back(x, y, z);
        }
      }
    }
  }
  return cloud;
}

}  // namespace mrplan
