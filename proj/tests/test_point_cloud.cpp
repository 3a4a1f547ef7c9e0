#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "mrplan/errors.hpp"
#include "mrplan/point_cloud.hpp"

using namespace mrplan;

namespace {
double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }
}  // namespace

TEST_CASE("ply round trip") {
  PointCloud cloud;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 257; ++i) {
    cloud.points.emplace_back(unit(rng) * 10 - 5, unit(rng) * 4, unit(rng) * 3);
  }
  const auto path = std::filesystem::temp_directory_path() / "mrplan_test_cloud.ply";
  write_ply(cloud, path.string());
  const PointCloud back = read_ply(path.string());
  REQUIRE(back.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((back.points[i] - cloud.points[i]).norm() < 1e-7);
  }
  std::filesystem::remove(path);
}

TEST_CASE("ply rejects garbage") {
  const auto path = std::filesystem::temp_directory_path() / "mrplan_bad.ply";
  {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    std::fputs("not a ply\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_ply(path.string()), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("sensor reveal") {
  std::mt19937_64 rng(11);
  PointCloud world;
  for (int i = 0; i < 500; ++i) {
    world.points.emplace_back(unit(rng) * 20, unit(rng) * 20, unit(rng) * 5);
  }
  const Vec3 pose(10, 10, 2.5);

  SUBCASE("radius beyond world diameter returns everything") {
    CHECK(sensor_reveal(world, pose, 100.0).size() == world.size());
  }
  SUBCASE("far pose returns nothing") {
    CHECK(sensor_reveal(world, Vec3(1000, 0, 0), 5.0).empty());
  }
  SUBCASE("matches a brute-force distance filter") {
    const double radius = 4.0;
    const PointCloud got = sensor_reveal(world, pose, radius);
    std::vector<Vec3> expected;
    for (const auto& p : world.points) {
      const double dx = p.x() - pose.x(), dy = p.y() - pose.y(), dz = p.z() - pose.z();
      if (std::sqrt(dx * dx + dy * dy + dz * dz) <= radius) expected.push_back(p);
    }
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK((got.points[i] - expected[i]).norm() == 0.0);
    }
  }
  SUBCASE("radius must be positive") {
    CHECK_THROWS_AS(sensor_reveal(world, pose, 0.0), PreconditionError);
  }
}
