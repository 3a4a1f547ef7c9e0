#include "mrplan/validate.hpp"

#include <cmath>

#include "mrplan/errors.hpp"
#include "mrplan/flatness.hpp"

namespace mrplan {

ValidationReport validate_trajectory(const PiecewiseTrajectory& traj, const Corridor& corridor,
                                     const DroneModel& drone, PlanMode mode,
                                     const KinoLimits& limits, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("validation step must be > 0");
  if (traj.piece_count() != corridor.size()) {
    throw InvalidInputError("validate: piece count must match corridor length");
  }

  constexpr double kTol = 1e-6;
  ValidationReport rep;
  rep.pass = true;

  // Stacked row matrices per polyhedron for the entry-wise evaluation route.
  std::vector<Eigen::MatrixX3d> A(corridor.size());
  std::vector<Eigen::VectorXd> b(corridor.size());
  for (std::size_t k = 0; k < corridor.size(); ++k) {
    const auto& rows = corridor.polys[k].rows;
    A[k].resize(rows.size(), 3);
    b[k].resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      A[k].row(r) = rows[r].normal.transpose();
      b[k][r] = rows[r].offset;
    }
  }

  const Mat3 Q = drone.shape();
  const double total = traj.total_duration();
  const std::size_t n = static_cast<std::size_t>(std::ceil(total / dt));
  YawTracker yaw;

  auto fail = [&](double t, int row, const std::string& why) {
    if (rep.pass) {
      rep.first_violation_time = t;
      rep.first_violation_row = row;
      rep.reason = why;
    }
    rep.pass = false;
  };

  for (std::size_t s = 0; s <= n; ++s) {
    const double t = std::min(s * dt, total);
    const std::size_t pi = traj.piece_index(t);
    const FlatState x = traj.state(t);

    const double nv = x.v.norm(), na = x.a.norm(), nj = x.j.norm();
    rep.max_v = std::max(rep.max_v, nv);
    rep.max_a = std::max(rep.max_a, na);
    rep.max_j = std::max(rep.max_j, nj);
    if (nv > limits.v_max + kTol || na > limits.a_max + kTol || nj > limits.j_max + kTol) {
      fail(t, -2, "kinodynamic limit exceeded");
    }

    Eigen::VectorXd res;
    if (mode == PlanMode::R3) {
      res = A[pi] * x.p - b[pi];
    } else {
      const double psi = yaw.update(x.v);
      Mat3 R;
      try {
        R = flat_to_rotation(x.a, psi);
      } catch (const SingularityError&) {
        fail(t, -3, "attitude singular along trajectory");
        continue;
      }
      // Entry-wise form: [[A R Q]^2 1]^(1/2) + A p - b.
      const Eigen::MatrixX3d G = A[pi] * R * Q;
      res = G.array().square().rowwise().sum().sqrt().matrix() + A[pi] * x.p - b[pi];
    }
    for (int r = 0; r < res.size(); ++r) {
      rep.max_corridor_residual = std::max(rep.max_corridor_residual, res[r]);
      if (res[r] > kTol) fail(t, r, "corridor constraint violated");
    }
  }
  return rep;
}

}  // namespace mrplan
