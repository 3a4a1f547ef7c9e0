#include <doctest.h>

#include <random>

#include "mrplan/errors.hpp"
#include "mrplan/flatness.hpp"

using namespace mrplan;

namespace {
double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }
}  // namespace

TEST_CASE("flat_to_rotation") {
  SUBCASE("hover is the identity") {
    const Mat3 R = flat_to_rotation(Vec3::Zero(), 0.0);
    CHECK((R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("lateral acceleration tilts the thrust axis") {
    const Mat3 R = flat_to_rotation(Vec3(0, kGravity, 0), M_PI / 2);
    const Vec3 zb = R.col(2);
    CHECK((zb - Vec3(0, 1, 1).normalized()).norm() < 1e-12);
    CHECK((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("orthonormal with unit determinant on random inputs") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 200; ++i) {
      const Vec3 a((unit(rng) - 0.5) * 10, (unit(rng) - 0.5) * 10, (unit(rng) - 0.5) * 10);
      const double yaw = (unit(rng) - 0.5) * 2 * M_PI;
      if ((a + kGravity * Vec3::UnitZ()).norm() <= 1e-3) continue;
      Mat3 R;
      try {
        R = flat_to_rotation(a, yaw);
      } catch (const SingularityError&) {
        continue;  // pitch-degenerate draw
      }
      CHECK((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-9));
      const Vec3 thrust = (a + kGravity * Vec3::UnitZ()).normalized();
      CHECK((R.transpose() * thrust - Vec3::UnitZ()).norm() < 1e-9);
    }
  }
  SUBCASE("free fall is singular") {
    CHECK_THROWS_AS(flat_to_rotation(Vec3(0, 0, -kGravity), 0.0), SingularityError);
  }
}

TEST_CASE("yaw_tangent") {
  // Forward flight, then a hover tail: yaw must hold its last value.
  const FlatState moving{Vec3::Zero(), Vec3(1, 0, 0), Vec3::Zero(), Vec3::Zero()};
  const FlatState still = FlatState::rest(Vec3(2, 0, 0));
  const PolyPiece run = solve_boundary_polynomial(moving, still, 2.0);
  PolyPiece hover;
  hover.coeffs.row(0) = Eigen::RowVector3d(2, 0, 0);
  hover.duration = 1.0;
  const PiecewiseTrajectory traj({run, hover});

  CHECK(yaw_tangent(traj, 0.0) == doctest::Approx(0.0));
  CHECK(yaw_tangent(traj, 2.5) == doctest::Approx(0.0));  // held through hover

  const FlatState up{Vec3::Zero(), Vec3(0, 1, 0), Vec3::Zero(), Vec3::Zero()};
  const PolyPiece py = solve_boundary_polynomial(up, FlatState::rest(Vec3(0, 2, 0)), 2.0);
  const PiecewiseTrajectory ty({py});
  CHECK(yaw_tangent(ty, 0.0) == doctest::Approx(M_PI / 2));
}

TEST_CASE("yaw tracker holds through slow samples") {
  YawTracker yaw;
  CHECK(yaw.update(Vec3(1, 1, 0)) == doctest::Approx(M_PI / 4));
  CHECK(yaw.update(Vec3(1e-6, 0, 0)) == doctest::Approx(M_PI / 4));
  CHECK(yaw.update(Vec3(-1, 0, 0)) == doctest::Approx(M_PI));
}
