#include <doctest.h>

#include <random>

#include "mrplan/errors.hpp"
#include "mrplan/min_snap.hpp"
#include "mrplan/polynomial.hpp"

using namespace mrplan;

namespace {
double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

FlatState random_state(std::mt19937_64& rng, double scale = 1.0) {
  FlatState s;
  for (int k = 0; k < 3; ++k) {
    s.p[k] = (unit(rng) * 2 - 1) * 3 * scale;
    s.v[k] = (unit(rng) * 2 - 1) * 2 * scale;
    s.a[k] = (unit(rng) * 2 - 1) * 2 * scale;
    s.j[k] = (unit(rng) * 2 - 1) * 2 * scale;
  }
  return s;
}
}  // namespace

TEST_CASE("piece evaluation") {
  SUBCASE("constant piece has zero velocity") {
    PolyPiece p;
    p.coeffs.row(0) = Eigen::RowVector3d(1.0, -2.0, 0.5);
    p.duration = 2.0;
    const PiecewiseTrajectory traj({p});
    CHECK(traj.eval(1.3, 1).norm() == 0.0);
    CHECK((traj.eval(0.4, 0) - Vec3(1.0, -2.0, 0.5)).norm() == 0.0);
  }
  SUBCASE("linear piece has constant slope") {
    PolyPiece p;
    p.coeffs.row(1) = Eigen::RowVector3d(1.0, 2.0, 3.0);
    p.duration = 5.0;
    const PiecewiseTrajectory traj({p});
    for (double t : {0.0, 1.7, 5.0}) {
      CHECK((traj.eval(t, 1) - Vec3(1, 2, 3)).norm() < 1e-15);
    }
  }
  SUBCASE("derivatives match finite differences") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      PolyPiece p;
      for (int k = 0; k < 8; ++k) {
        p.coeffs.row(k) = Eigen::RowVector3d(unit(rng) - 0.5, unit(rng) - 0.5, unit(rng) - 0.5);
      }
      p.duration = 0.5 + unit(rng) * 2;
      const PiecewiseTrajectory traj({p});
      const double T = p.duration;
      const double h = 1e-5 * T;
      for (int order = 0; order < 3; ++order) {
        for (double frac : {0.2, 0.5, 0.8}) {
          const double t = frac * T;
          const Vec3 fd = (traj.eval(t + h, order) - traj.eval(t - h, order)) / (2 * h);
          const Vec3 an = traj.eval(t, order + 1);
          CHECK((fd - an).norm() <= 1e-5 * std::max(1.0, an.norm()));
        }
      }
    }
  }
  SUBCASE("domain errors outside the time range") {
    PolyPiece p;
    p.duration = 1.0;
    const PiecewiseTrajectory traj({p});
    CHECK_THROWS_AS(traj.eval(-0.5, 0), DomainError);
    CHECK_THROWS_AS(traj.eval(1.5, 0), DomainError);
    CHECK_NOTHROW(traj.eval(1.0, 0));  // final endpoint inclusive
  }
}

TEST_CASE("solve_boundary_polynomial") {
  SUBCASE("rest to rest at the same point is the zero polynomial") {
    const FlatState s = FlatState::rest(Vec3::Zero());
    const PolyPiece p = solve_boundary_polynomial(s, s, 1.0);
    CHECK(p.coeffs.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rest-to-rest unit displacement midpoint symmetry") {
    const FlatState s0 = FlatState::rest(Vec3::Zero());
    const FlatState s1 = FlatState::rest(Vec3(1, 0, 0));
    const PolyPiece p = solve_boundary_polynomial(s0, s1, 2.0);
    CHECK((p.eval(0.0, 0) - s0.p).norm() < 1e-9);
    CHECK((p.eval(2.0, 0) - s1.p).norm() < 1e-9);
    CHECK((p.eval(1.0, 0) - Vec3(0.5, 0, 0)).norm() < 1e-9);
  }
  SUBCASE("boundary conditions reproduced on random instances") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
      const FlatState a = random_state(rng);
      const FlatState b = random_state(rng);
      const double T = 0.3 + unit(rng) * 4;
      const PolyPiece p = solve_boundary_polynomial(a, b, T);
      CHECK((p.eval(0, 0) - a.p).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.eval(0, 1) - a.v).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.eval(0, 2) - a.a).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.eval(0, 3) - a.j).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.eval(T, 0) - b.p).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.eval(T, 1) - b.v).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.eval(T, 2) - b.a).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.eval(T, 3) - b.j).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("check_kinodynamic") {
  SUBCASE("zero trajectory has zero norms") {
    PolyPiece p;
    p.duration = 1.0;
    const auto rep = check_kinodynamic(PiecewiseTrajectory({p}), KinoLimits{1, 1, 1});
    CHECK(rep.ok);
    CHECK(rep.max_v == 0.0);
  }
  SUBCASE("constant speed violation reported at t = 0") {
    PolyPiece p;
    p.coeffs.row(1) = Eigen::RowVector3d(3.0, 0, 0);
    p.duration = 1.0;
    const auto rep = check_kinodynamic(PiecewiseTrajectory({p}), KinoLimits{2, 10, 10});
    CHECK_FALSE(rep.ok);
    CHECK(rep.t_v == 0.0);
    CHECK(rep.max_v == doctest::Approx(3.0));
  }
  SUBCASE("max speed agrees with a 10x finer grid") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 10; ++trial) {
      const PolyPiece p =
          solve_boundary_polynomial(random_state(rng), random_state(rng), 1.5);
      const PiecewiseTrajectory traj({p});
      const KinoLimits lim{1e9, 1e9, 1e9};
      const auto coarse = check_kinodynamic(traj, lim, 1e-3);
      const auto fine = check_kinodynamic(traj, lim, 1e-4);
      CHECK(std::abs(coarse.max_v - fine.max_v) < 1e-6 * std::max(1.0, fine.max_v));
    }
  }
}

TEST_CASE("lqmt_global") {
  SUBCASE("identical states get the minimal duration floor") {
    const FlatState s = FlatState::rest(Vec3(1, 2, 3));
    const auto traj = lqmt_global(s, s, KinoLimits{2, 10, 50});
    CHECK(traj.total_duration() == doctest::Approx(0.1));
  }
  SUBCASE("velocity-limited line reaches (almost) the speed cap") {
    const FlatState a = FlatState::rest(Vec3::Zero());
    const FlatState b = FlatState::rest(Vec3(10, 0, 0));
    const KinoLimits lim{2.0, 50.0, 1000.0};
    const auto traj = lqmt_global(a, b, lim);
    const auto rep = check_kinodynamic(traj, lim, 1e-3);
    CHECK(rep.ok);
    CHECK(rep.max_v <= 2.0);
    CHECK(rep.max_v >= 0.99 * 2.0);
  }
  SUBCASE("halving v_max increases the duration") {
    const FlatState a = FlatState::rest(Vec3::Zero());
    const FlatState b = FlatState::rest(Vec3(10, 0, 0));
    const double t_fast = lqmt_global(a, b, KinoLimits{2.0, 50, 1000}).total_duration();
    const double t_slow = lqmt_global(a, b, KinoLimits{1.0, 50, 1000}).total_duration();
    CHECK(t_slow > t_fast);
  }
  SUBCASE("output always passes the 1 kHz check") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
      const FlatState a = FlatState::rest(
          Vec3(unit(rng) * 5, unit(rng) * 5, unit(rng) * 2));
      const FlatState b = FlatState::rest(
          Vec3(unit(rng) * 5 + 5, unit(rng) * 5, unit(rng) * 2));
      const KinoLimits lim{3.0, 10.0, 60.0};
      CHECK(check_kinodynamic(lqmt_global(a, b, lim), lim, 1e-3).ok);
    }
  }
}

TEST_CASE("stitch") {
  std::mt19937_64 rng(3);
  const FlatState s0 = FlatState::rest(Vec3::Zero());
  const FlatState mid = random_state(rng);  // shared junction

  SUBCASE("single part is returned unchanged") {
    const PiecewiseTrajectory t({solve_boundary_polynomial(s0, mid, 1.0)});
    const PiecewiseTrajectory out = stitch({t});
    CHECK(out.total_duration() == t.total_duration());
  }
  SUBCASE("shared boundary state stitches cleanly") {
    const PiecewiseTrajectory t1({solve_boundary_polynomial(s0, mid, 1.0)});
    const PiecewiseTrajectory t2({solve_boundary_polynomial(mid, s0, 1.5)});
    const PiecewiseTrajectory out = stitch({t1, t2});
    CHECK(out.piece_count() == 2);
    CHECK(out.max_junction_jump() <= 1e-6);
  }
  SUBCASE("velocity mismatch names the junction and component") {
    FlatState mid2 = mid;
    mid2.v.x() += 0.1;
    const PiecewiseTrajectory t1({solve_boundary_polynomial(s0, mid, 1.0)});
    const PiecewiseTrajectory t2({solve_boundary_polynomial(mid2, s0, 1.5)});
    try {
      stitch({t1, t2});
      FAIL("expected a stitch error");
    } catch (const StitchError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("junction 0") != std::string::npos);
      CHECK(msg.find("component v") != std::string::npos);
    }
  }
}

TEST_CASE("min_snap_interpolate") {
  std::mt19937_64 rng(37);
  SUBCASE("single piece reduces to the boundary solve") {
    const FlatState a = random_state(rng), b = random_state(rng);
    const auto traj = min_snap_interpolate(a, b, {}, {1.7});
    const PolyPiece direct = solve_boundary_polynomial(a, b, 1.7);
    CHECK((traj.pieces()[0].coeffs - direct.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("passes through interior waypoints, jerk-continuous") {
    const FlatState a = FlatState::rest(Vec3::Zero());
    const FlatState b = FlatState::rest(Vec3(3, 1, 0.5));
    const std::vector<Vec3> q{Vec3(1, 0.5, 0.2), Vec3(2, 0.7, 0.4)};
    const auto traj = min_snap_interpolate(a, b, q, {1.0, 1.0, 1.0});
    CHECK(traj.max_junction_jump() < 1e-9);
    CHECK((traj.eval(1.0, 0) - q[0]).norm() < 1e-9);
    CHECK((traj.eval(2.0, 0) - q[1]).norm() < 1e-9);
    CHECK((traj.eval(0.0, 1) - a.v).norm() < 1e-9);
    CHECK((traj.eval(3.0, 3) - b.j).norm() < 1e-8);
  }
  SUBCASE("junction derivatives minimize the snap energy") {
    // Perturbing any junction derivative must not reduce the energy.
    const FlatState a = FlatState::rest(Vec3::Zero());
    const FlatState b = FlatState::rest(Vec3(2, 0, 0));
    const std::vector<Vec3> q{Vec3(1, 0.3, 0)};
    const std::vector<double> T{1.0, 1.2};
    const auto traj = min_snap_interpolate(a, b, q, T);
    const double e0 = snap_energy(traj);

    const FlatState base = traj.state(1.0);
    for (int comp = 0; comp < 9; ++comp) {
      FlatState mid = base;
      const double eps = 1e-4;
      if (comp < 3) mid.v[comp] += eps;
      else if (comp < 6) mid.a[comp - 3] += eps;
      else mid.j[comp - 6] += eps;
      const PiecewiseTrajectory alt({solve_boundary_polynomial(a, mid, T[0]),
                                     solve_boundary_polynomial(mid, b, T[1])});
      CHECK(snap_energy(alt) >= e0 - 1e-9);
    }
  }
}
