#include <doctest.h>

#include <queue>
#include <random>

#include "mrplan/errors.hpp"
#include "mrplan/mr_search.hpp"
#include "test_worlds.hpp"

using namespace mrplan;
using namespace mrplan::testing;

namespace {

double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Uniform-cost (Dijkstra) oracle with the same canonical step-count cost
// convention, so mathematically equal path lengths compare bit-identically.
struct DijkstraOracle {
  bool found{false};
  double cost{0.0};

  DijkstraOracle(const VoxelGrid& g, const Vec3i& start, const Vec3i& goal) {
    const double w1 = g.resolution();
    const double w2 = w1 * std::sqrt(2.0);
    const double w3 = w1 * std::sqrt(3.0);
    struct Node {
      double g;
      std::size_t idx;
      bool operator>(const Node& o) const { return g > o.g; }
    };
    std::vector<double> dist(g.cell_count(), std::numeric_limits<double>::infinity());
    std::vector<std::array<std::uint16_t, 3>> cnt(g.cell_count(), {0, 0, 0});
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
    const std::size_t si = g.linear(start);
    dist[si] = 0.0;
    pq.push(Node{0.0, si});
    while (!pq.empty()) {
      const Node cur = pq.top();
      pq.pop();
      if (cur.g > dist[cur.idx]) continue;
      const Vec3i c = g.delinear(cur.idx);
      if (c == goal) {
        found = true;
        cost = cur.g;
        return;
      }
      for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (!dx && !dy && !dz) continue;
            const Vec3i nb = c + Vec3i(dx, dy, dz);
            if (!g.in_bounds(nb) || g.occupied_in_bounds(nb)) continue;
            auto nc = cnt[cur.idx];
            nc[std::abs(dx) + std::abs(dy) + std::abs(dz) - 1]++;
            const double ng = nc[0] * w1 + nc[1] * w2 + nc[2] * w3;
            const std::size_t ni = g.linear(nb);
            if (ng < dist[ni]) {
              dist[ni] = ng;
              cnt[ni] = nc;
              pq.push(Node{ng, ni});
            }
          }
        }
      }
    }
  }
};

}  // namespace

TEST_CASE("astar basics") {
  const VoxelGrid g = build_voxel_grid(PointCloud{}, 0.1, Aabb{Vec3::Zero(), Vec3(1, 1, 1)});
  SUBCASE("start equals goal") {
    const auto res = astar_grid(g, Vec3(0.5, 0.5, 0.5), Vec3(0.52, 0.48, 0.5), 1000);
    REQUIRE(res.status == SearchStatus::Found);
    CHECK(res.path.waypoints.size() == 1);
    CHECK(res.path.cost == 0.0);
  }
  SUBCASE("occupied endpoints are precondition errors") {
    PointCloud c;
    c.points.emplace_back(0.5, 0.5, 0.5);
    const VoxelGrid g2 = build_voxel_grid(c, 0.1, Aabb{Vec3::Zero(), Vec3(1, 1, 1)});
    CHECK_THROWS_AS(astar_grid(g2, Vec3(0.5, 0.5, 0.5), Vec3(0.1, 0.1, 0.1), 1000),
                    PreconditionError);
  }
  SUBCASE("sealed goal is unreachable") {
    PointCloud c;
    // A closed box of points around the goal cell.
    for (double x = 0.35; x <= 0.65; x += 0.05) {
      for (double y = 0.35; y <= 0.65; y += 0.05) {
        for (double z = 0.35; z <= 0.65; z += 0.05) {
          const bool boundary = x < 0.4 || x > 0.6 || y < 0.4 || y > 0.6 || z < 0.4 || z > 0.6;
          if (boundary) c.points.emplace_back(x, y, z);
        }
      }
    }
    const VoxelGrid g2 = build_voxel_grid(c, 0.1, Aabb{Vec3::Zero(), Vec3(1, 1, 1)});
    const auto res = astar_grid(g2, Vec3(0.05, 0.05, 0.05), Vec3(0.5, 0.5, 0.5), 100000);
    CHECK(res.status == SearchStatus::Unreachable);
  }
  SUBCASE("zero budget is a config error") {
    CHECK_THROWS_AS(astar_grid(g, Vec3(0.1, 0.1, 0.1), Vec3(0.9, 0.9, 0.9), 0), ConfigError);
  }
}

TEST_CASE("astar equals dijkstra on random grids") {
  std::mt19937_64 rng(101);
  int compared = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Aabb box{Vec3::Zero(), Vec3(2, 2, 2)};
    PointCloud cloud;
    // ~20% occupancy over a 20^3 grid at resolution 0.1.
    for (int i = 0; i < 1600; ++i) {
      cloud.points.emplace_back(unit(rng) * 2, unit(rng) * 2, unit(rng) * 2);
    }
    const VoxelGrid g = build_voxel_grid(cloud, 0.1, box);

    // Random free endpoints.
    Vec3 s, t;
    int guard = 0;
    do {
      s = Vec3(unit(rng) * 2, unit(rng) * 2, unit(rng) * 2);
    } while (g.query_occupied(s) && ++guard < 1000);
    guard = 0;
    do {
      t = Vec3(unit(rng) * 2, unit(rng) * 2, unit(rng) * 2);
    } while (g.query_occupied(t) && ++guard < 1000);
    if (g.query_occupied(s) || g.query_occupied(t)) continue;

    const auto res = astar_grid(g, s, t, 10'000'000);
    const DijkstraOracle oracle(g, g.cell_of(s), g.cell_of(t));
    REQUIRE((res.status == SearchStatus::Found) == oracle.found);
    if (oracle.found) {
      CHECK(res.path.cost == oracle.cost);  // exact equality
      ++compared;
    }
  }
  CHECK(compared >= 30);
}

TEST_CASE("extract_colliding_segments") {
  const KinoLimits lim{3.0, 10.0, 60.0};
  SUBCASE("free trajectory yields no segments") {
    const Aabb room{Vec3(0, -1.5, 0), Vec3(4, 1.5, 3)};
    const DualResMap map = DualResMap::build(PointCloud{}, DroneModel(0.3, 0.1), room);
    const auto traj = lqmt_global(FlatState::rest(Vec3(0.5, 0, 1.5)),
                                  FlatState::rest(Vec3(3.5, 0, 1.5)), lim);
    CHECK(extract_colliding_segments(traj, map.lrm).empty());
  }
  SUBCASE("single wall is bracketed by one segment") {
    const GapWorld w = make_gap_world(0.0, 0.0, /*has_gap=*/false);
    const auto traj = lqmt_global(FlatState::rest(Vec3(0.5, 0, 1.5)),
                                  FlatState::rest(Vec3(3.5, 0, 1.5)), lim);
    const auto segs = extract_colliding_segments(traj, w.map.lrm);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].entry.x() < 2.0 - 0.1);
    CHECK(segs[0].exit.x() > 2.0 + 0.1);
    CHECK(segs[0].t_entry < segs[0].t_exit);
    CHECK_FALSE(w.map.lrm.query_occupied(segs[0].entry));
    CHECK_FALSE(w.map.lrm.query_occupied(segs[0].exit));
  }
  SUBCASE("close walls merge into one segment") {
    const Aabb room{Vec3(0, -1.5, 0), Vec3(6, 1.5, 3)};
    const PointCloud cloud =
        make_walls(room, {GapSpec{2.0, 0, 1.5, 0, 0, false}, GapSpec{3.5, 0, 1.5, 0, 0, false}});
    const DualResMap map = DualResMap::build(cloud, DroneModel(0.3, 0.1), room);
    const auto traj = lqmt_global(FlatState::rest(Vec3(0.5, 0, 1.5)),
                                  FlatState::rest(Vec3(5.5, 0, 1.5)), lim);
    // Free gap between the two inflated walls is ~0.4 m < 2 * margin * r = 1.2.
    const auto segs = extract_colliding_segments(traj, map.lrm, 5e-3, 2);
    CHECK(segs.size() == 1);
  }
  SUBCASE("occupied start is an invalid request") {
    const GapWorld w = make_gap_world(0.0, 0.0, false);
    const auto traj = lqmt_global(FlatState::rest(Vec3(1.9, 0, 1.5)),
                                  FlatState::rest(Vec3(3.5, 0, 1.5)), lim);
    CHECK_THROWS_AS(extract_colliding_segments(traj, w.map.lrm), InvalidInputError);
  }
}

TEST_CASE("mr_search classification") {
  const CollidingSegment seg{Vec3(0.5, 0, 1.5), Vec3(3.5, 0, 1.5), 0.0, 1.0};

  SUBCASE("wide gap classifies as R3") {
    const GapWorld w = make_gap_world(1.0, 1.3);
    const MrResult res = mr_search(seg, w.map);
    CHECK(res.cls == MrClass::R3);
    for (const auto& p : res.path.waypoints) CHECK_FALSE(w.map.lrm.query_occupied(p));
  }
  SUBCASE("narrow gap classifies as SE3 candidate") {
    const GapWorld w = make_gap_world(0.28, 1.5);
    const MrResult res = mr_search(seg, w.map);
    CHECK(res.cls == MrClass::SE3Candidate);
    REQUIRE(res.lrs != nullptr);
    for (const auto& p : res.path.waypoints) CHECK_FALSE(w.map.hrm.query_occupied(p));
  }
  SUBCASE("sub-body gap is unreachable") {
    const GapWorld w = make_gap_world(0.05, 1.5);
    const MrResult res = mr_search(seg, w.map);
    CHECK(res.cls == MrClass::Unreachable);
  }
  SUBCASE("identical inputs give identical results") {
    const GapWorld w = make_gap_world(0.28, 1.5);
    const MrResult a = mr_search(seg, w.map);
    const MrResult b = mr_search(seg, w.map);
    REQUIRE(a.cls == b.cls);
    REQUIRE(a.path.waypoints.size() == b.path.waypoints.size());
    for (std::size_t i = 0; i < a.path.waypoints.size(); ++i) {
      CHECK(a.path.waypoints[i] == b.path.waypoints[i]);
    }
    CHECK(a.path.cost == b.path.cost);
  }
}

TEST_CASE("lrs suspension and resume") {
  // Narrow gap with a side opening: the wall covers y <= 1.1 only, so a
  // low-resolution detour exists around its end.
  const Aabb room{Vec3(0, -1.5, 0), Vec3(4, 2.5, 3)};
  PointCloud cloud;
  const GapSpec gap{2.0, 0.0, 1.5, 0.28, 1.5, true};
  {
    // Wall slab truncated at y = 1.1.
    PointCloud full = make_walls(room, {gap});
    for (const auto& p : full.points) {
      if (p.y() <= 1.1) cloud.points.push_back(p);
    }
  }
  const DualResMap map = DualResMap::build(cloud, DroneModel(0.3, 0.1), room);
  const CollidingSegment seg{Vec3(0.5, 0, 1.5), Vec3(3.5, 0, 1.5), 0.0, 1.0};

  const MrResult res = mr_search(seg, map);
  REQUIRE(res.cls == MrClass::SE3Candidate);
  REQUIRE(res.lrs != nullptr);

  SUBCASE("resume with zero budget stays exhausted") {
    const AstarResult r = resume_lrs(*res.lrs, 0);
    CHECK(r.status == SearchStatus::Running);
    CHECK_THROWS_AS(resume_lrs(*res.lrs, 10), StateError);  // consumed
  }
  SUBCASE("resumed search matches a fresh unrestricted search") {
    const AstarResult resumed = resume_lrs(*res.lrs, 1'000'000);
    REQUIRE(resumed.status == SearchStatus::Found);
    for (const auto& p : resumed.path.waypoints) CHECK_FALSE(map.lrm.query_occupied(p));

    const AstarResult fresh = astar_grid(map.lrm, seg.entry, seg.exit, 10'000'000);
    REQUIRE(fresh.status == SearchStatus::Found);
    CHECK(fresh.path.cost == resumed.path.cost);
    REQUIRE(fresh.path.waypoints.size() == resumed.path.waypoints.size());
    for (std::size_t i = 0; i < fresh.path.waypoints.size(); ++i) {
      CHECK(fresh.path.waypoints[i] == resumed.path.waypoints[i]);
    }
  }
}
