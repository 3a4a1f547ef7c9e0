#include <doctest.h>

#include <random>
#include <set>
#include <tuple>

#include "mrplan/dual_map.hpp"
#include "mrplan/errors.hpp"
#include "mrplan/maze.hpp"
#include "mrplan/voxel_grid.hpp"

using namespace mrplan;

namespace {
double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

Aabb box(double x, double y, double z) { return Aabb{Vec3::Zero(), Vec3(x, y, z)}; }
}  // namespace

TEST_CASE("build_voxel_grid basics") {
  SUBCASE("empty cloud is all free") {
    const VoxelGrid g = build_voxel_grid(PointCloud{}, 0.1, box(1, 1, 1));
    CHECK(g.occupied_count() == 0);
    CHECK(g.dims() == Vec3i(10, 10, 10));
  }
  SUBCASE("single point at a cell center occupies exactly one cell") {
    PointCloud c;
    c.points.emplace_back(0.35, 0.45, 0.55);
    const VoxelGrid g = build_voxel_grid(c, 0.1, box(1, 1, 1));
    CHECK(g.occupied_count() == 1);
    CHECK(g.query_occupied(Vec3(0.35, 0.45, 0.55)));
  }
  SUBCASE("occupied cells equal distinct quantized indices") {
    // Independent quantization pass: a plain floor over each axis into a set.
    std::mt19937_64 rng(3);
    PointCloud c;
    for (int i = 0; i < 1000; ++i) {
      c.points.emplace_back(unit(rng) * 2, unit(rng) * 2, unit(rng) * 2);
    }
    const double res = 0.13;
    const VoxelGrid g = build_voxel_grid(c, res, box(2, 2, 2));
    std::set<std::tuple<int, int, int>> idx;
    for (const auto& p : c.points) {
      const int ix = static_cast<int>(std::floor(p.x() / res));
      const int iy = static_cast<int>(std::floor(p.y() / res));
      const int iz = static_cast<int>(std::floor(p.z() / res));
      idx.insert({ix, iy, iz});
    }
    CHECK(g.occupied_count() == idx.size());
  }
  SUBCASE("non-finite point is rejected") {
    PointCloud c;
    c.points.emplace_back(std::numeric_limits<double>::quiet_NaN(), 0, 0);
    CHECK_THROWS_AS(build_voxel_grid(c, 0.1, box(1, 1, 1)), InvalidInputError);
  }
  SUBCASE("points outside bounds are ignored") {
    PointCloud c;
    c.points.emplace_back(5.0, 5.0, 5.0);
    const VoxelGrid g = build_voxel_grid(c, 0.1, box(1, 1, 1));
    CHECK(g.occupied_count() == 0);
  }
}

TEST_CASE("inflate_grid") {
  PointCloud c;
  c.points.emplace_back(1.05, 1.05, 1.05);
  const VoxelGrid g = build_voxel_grid(c, 0.1, box(2.1, 2.1, 2.1));
  REQUIRE(g.occupied_count() == 1);

  SUBCASE("radius zero is the identity") {
    const VoxelGrid out = inflate_grid(g, 0.0);
    CHECK(out.occupied_count() == 1);
    CHECK(out.raw() == g.raw());
  }
  SUBCASE("one cell edge yields the 7-cell face neighborhood") {
    const VoxelGrid out = inflate_grid(g, 0.1);
    CHECK(out.occupied_count() == 7);
    const Vec3i c0 = g.cell_of(Vec3(1.05, 1.05, 1.05));
    for (int k = 0; k < 3; ++k) {
      Vec3i n = c0;
      n[k] += 1;
      CHECK(out.occupied(n));
      n[k] -= 2;
      CHECK(out.occupied(n));
    }
  }
  SUBCASE("double inflation dominates single inflation") {
    const VoxelGrid once = inflate_grid(g, 0.15);
    const VoxelGrid twice = inflate_grid(inflate_grid(g, 0.15), 0.15);
    for (std::size_t i = 0; i < once.raw().size(); ++i) {
      if (once.raw()[i]) CHECK(twice.raw()[i]);
    }
  }
  SUBCASE("monotone in the radius and matches distance enumeration") {
    std::mt19937_64 rng(17);
    PointCloud cloud;
    for (int i = 0; i < 40; ++i) {
      cloud.points.emplace_back(unit(rng) * 1.5, unit(rng) * 1.5, unit(rng) * 1.5);
    }
    const VoxelGrid base = build_voxel_grid(cloud, 0.15, box(1.5, 1.5, 1.5));
    const double r1 = 0.2, r2 = 0.35;
    const VoxelGrid out1 = inflate_grid(base, r1);
    const VoxelGrid out2 = inflate_grid(base, r2);

    // Oracle: enumerate occupied centers within the radius, exhaustively.
    auto oracle = [&](const Vec3i& cell, double radius) {
      for (int z = 0; z < base.dims().z(); ++z) {
        for (int y = 0; y < base.dims().y(); ++y) {
          for (int x = 0; x < base.dims().x(); ++x) {
            const Vec3i cc(x, y, z);
            if (!base.occupied_in_bounds(cc)) continue;
            const Vec3i d = cc - cell;
            const double dist2 =
                (d.x() * d.x() + d.y() * d.y() + d.z() * d.z()) * 0.15 * 0.15;
            if (dist2 <= radius * radius * (1 + 1e-9)) return true;
          }
        }
      }
      return false;
    };
    for (int z = 0; z < base.dims().z(); ++z) {
      for (int y = 0; y < base.dims().y(); ++y) {
        for (int x = 0; x < base.dims().x(); ++x) {
          const Vec3i cell(x, y, z);
          CHECK(out1.occupied(cell) == oracle(cell, r1));
          CHECK(out2.occupied(cell) == oracle(cell, r2));
          if (out1.occupied(cell)) CHECK(out2.occupied(cell));
        }
      }
    }
  }
}

TEST_CASE("query_occupied") {
  const VoxelGrid g = build_voxel_grid(PointCloud{}, 0.1, box(1, 1, 1));
  CHECK_FALSE(g.query_occupied(Vec3(0.5, 0.5, 0.5)));
  CHECK(g.query_occupied(Vec3(1.5, 0.5, 0.5)));  // out of bounds is occupied
  CHECK(g.query_occupied(Vec3(-0.1, 0.5, 0.5)));
}

TEST_CASE("segment_first_collision") {
  SUBCASE("free segment") {
    const VoxelGrid g = build_voxel_grid(PointCloud{}, 0.1, box(2, 1, 1));
    CHECK_FALSE(segment_first_collision(g, Vec3(0.1, 0.5, 0.5), Vec3(1.9, 0.5, 0.5)));
  }
  SUBCASE("wall crossing hits near the wall face") {
    PointCloud wall;
    for (double y = 0.025; y < 1.0; y += 0.05) {
      for (double z = 0.025; z < 1.0; z += 0.05) {
        wall.points.emplace_back(1.02, y, z);
      }
    }
    const VoxelGrid g = build_voxel_grid(wall, 0.1, box(2, 1, 1));
    const auto hit = segment_first_collision(g, Vec3(0.15, 0.5, 0.5), Vec3(1.9, 0.5, 0.5));
    REQUIRE(hit.has_value());
    // Wall cells span [1.0, 1.1); the near face is x = 1.0.
    CHECK(hit->x() == doctest::Approx(1.0).epsilon(0.0).scale(1.0));
    CHECK(std::abs(hit->x() - 1.0) <= 0.1);
  }
  SUBCASE("start inside an occupied cell reports the start") {
    PointCloud c;
    c.points.emplace_back(0.5, 0.5, 0.5);
    const VoxelGrid g = build_voxel_grid(c, 0.1, box(1, 1, 1));
    const auto hit = segment_first_collision(g, Vec3(0.52, 0.5, 0.5), Vec3(0.9, 0.5, 0.5));
    REQUIRE(hit.has_value());
    CHECK((*hit - Vec3(0.52, 0.5, 0.5)).norm() == 0.0);
  }
  SUBCASE("agrees with dense sampling on random segments") {
    std::mt19937_64 rng(23);
    PointCloud cloud;
    for (int i = 0; i < 60; ++i) {
      cloud.points.emplace_back(unit(rng) * 2, unit(rng) * 2, unit(rng) * 2);
    }
    const double res = 0.12;
    const VoxelGrid g = build_voxel_grid(cloud, res, box(2, 2, 2));

    for (int trial = 0; trial < 100; ++trial) {
      const Vec3 a(unit(rng) * 2, unit(rng) * 2, unit(rng) * 2);
      const Vec3 b(unit(rng) * 2, unit(rng) * 2, unit(rng) * 2);
      const auto hit = segment_first_collision(g, a, b);

      // Sampling oracle at resolution/100.
      const double len = (b - a).norm();
      const int steps = std::max(1, static_cast<int>(len / (res / 100.0)));
      std::optional<Vec3> sampled;
      for (int s = 0; s <= steps; ++s) {
        const Vec3 p = a + (b - a) * (double(s) / steps);
        if (g.query_occupied(p)) {
          sampled = p;
          break;
        }
      }
      if (sampled) {
        REQUIRE_MESSAGE(hit.has_value(), "traversal missed a sampled hit");
        CHECK((*hit - *sampled).norm() <= res);
      }
      if (!hit) CHECK_FALSE(sampled.has_value());
    }
  }
}

TEST_CASE("nearest_occupied_within") {
  SUBCASE("all free returns none") {
    const VoxelGrid g = build_voxel_grid(PointCloud{}, 0.1, box(1, 1, 1));
    CHECK_FALSE(nearest_occupied_within(g, Vec3(0.5, 0.5, 0.5), 1.0));
  }
  SUBCASE("unique candidate at half a meter") {
    PointCloud c;
    c.points.emplace_back(0.55, 0.05, 0.05);
    const VoxelGrid g = build_voxel_grid(c, 0.1, box(1, 1, 1));
    const auto got = nearest_occupied_within(g, Vec3(0.05, 0.05, 0.05), 1.0);
    REQUIRE(got.has_value());
    CHECK((*got - Vec3(0.55, 0.05, 0.05)).norm() < 1e-12);
    CHECK_FALSE(nearest_occupied_within(g, Vec3(0.05, 0.05, 0.05), 0.3));
  }
  SUBCASE("matches an exhaustive scan on random grids") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      PointCloud cloud;
      for (int i = 0; i < 30; ++i) {
        cloud.points.emplace_back(unit(rng) * 2, unit(rng) * 2, unit(rng));
      }
      const VoxelGrid g = build_voxel_grid(cloud, 0.11, box(2, 2, 1));
      const Vec3 p(unit(rng) * 2, unit(rng) * 2, unit(rng));
      const double d_max = 0.5 + unit(rng);
      const auto got = nearest_occupied_within(g, p, d_max);

      double best = d_max;
      bool found = false;
      for (std::size_t i = 0; i < g.cell_count(); ++i) {
        if (!g.raw()[i]) continue;
        const double d = (g.cell_center(g.delinear(i)) - p).norm();
        if (d <= best) {
          best = d;
          found = true;
        }
      }
      REQUIRE(got.has_value() == found);
      if (found) CHECK((*got - p).norm() == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("dual map conservativeness by sampling") {
  MazeConfig cfg;
  cfg.wall_count = 2;
  cfg.room = Aabb{Vec3(0, -3, 0), Vec3(10, 3, 3)};
  cfg.gaps = {GapClass{0.24, 0.30, 1.3, 1.7, 1.0}, GapClass{1.0, 1.4, 1.1, 1.5, 1.0}};
  const PointCloud cloud = generate_maze(cfg, 5);
  const DualResMap map = DualResMap::build(cloud, DroneModel(0.3, 0.1), cfg.room);

  std::mt19937_64 rng(41);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 p(unit(rng) * 10, unit(rng) * 6 - 3, unit(rng) * 3);
    if (!map.lrm.query_occupied(p)) {
      ++checked;
      CHECK_FALSE(map.hrm.query_occupied(p));
    }
  }
  CHECK(checked > 1000);
}
