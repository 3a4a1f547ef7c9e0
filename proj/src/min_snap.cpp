#include "mrplan/min_snap.hpp"

#include <cmath>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {

// Scaled-time machinery: with tau = t/T and scaled boundary vector
// u~ = (p, vT, aT^2/..., ...) the snap energy of one piece is
// T^-7 * u~' W u~ with a constant 8x8 W. Blocks of W drive the junction
// equations of the spline.
struct SnapForm {
  Eigen::Matrix<double, 8, 8> W;

  SnapForm() {
    Eigen::Matrix<double, 8, 8> B = Eigen::Matrix<double, 8, 8>::Zero();
    // conditions at tau = 0
    B(0, 0) = 1.0;
    B(1, 1) = 1.0;
    B(2, 2) = 2.0;
    B(3, 3) = 6.0;
    // conditions at tau = 1
    for (int k = 0; k < 8; ++k) {
      B(4, k) = 1.0;
      B(5, k) = k;
      B(6, k) = k * (k - 1);
      B(7, k) = k * (k - 1) * (k - 2);
    }
    const Eigen::Matrix<double, 8, 8> Binv = B.inverse();

    Eigen::Matrix<double, 8, 8> Q = Eigen::Matrix<double, 8, 8>::Zero();
    const double f[8] = {0, 0, 0, 0, 24, 120, 360, 840};  // k!/(k-4)!
    for (int k = 4; k < 8; ++k) {
      for (int l = 4; l < 8; ++l) {
        Q(k, l) = f[k] * f[l] / (k + l - 7);
      }
    }
    W = Binv.transpose() * Q * Binv;
  }
};

const SnapForm& snap_form() {
  static const SnapForm form;
  return form;
}

// Diagonal time scaling of the boundary vector: (1, T, T^2, T^3) twice.
Eigen::Matrix<double, 8, 1> time_scale(double T) {
  Eigen::Matrix<double, 8, 1> d;
  const double T2 = T * T, T3 = T2 * T;
  d << 1, T, T2, T3, 1, T, T2, T3;
  return d;
}

}  // namespace

PiecewiseTrajectory min_snap_interpolate(const FlatState& start, const FlatState& goal,
                                         const std::vector<Vec3>& interior,
                                         const std::vector<double>& durations) {
  const std::size_t m = durations.size();
  if (m == 0 || interior.size() + 1 != m) {
    throw InvalidInputError("min_snap: need M durations and M-1 interior waypoints");
  }
  for (double T : durations) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInputError("min_snap: bad duration");
  }

  if (m == 1) {
    return PiecewiseTrajectory({solve_boundary_polynomial(start, goal, durations[0])});
  }

  // Waypoint positions including the fixed ends.
  std::vector<Vec3> pos(m + 1);
  pos[0] = start.p;
  for (std::size_t k = 0; k < interior.size(); ++k) pos[k + 1] = interior[k];
  pos[m] = goal.p;

  // Junction unknowns d_k = (v, a, j) at k = 1..m-1, solved per axis from the
  // block-tridiagonal stationarity system of the snap energy.
  const auto& W = snap_form().W;
  const std::size_t nj = m - 1;

  std::vector<Eigen::Matrix3d> diag(nj, Eigen::Matrix3d::Zero());
  std::vector<Eigen::Matrix3d> lower(nj, Eigen::Matrix3d::Zero());  // couples d_{k-1}
  std::vector<Eigen::Matrix3d> upper(nj, Eigen::Matrix3d::Zero());  // couples d_{k+1}
  std::vector<Eigen::Matrix<double, 3, 3>> rhs(nj, Eigen::Matrix<double, 3, 3>::Zero());

  // Index blocks of the scaled boundary vector: p0=0, d0=1..3, p1=4, d1=5..7.
  for (std::size_t i = 0; i < m; ++i) {
    const double T = durations[i];
    const double Ti7 = 1.0 / std::pow(T, 7);
    const Eigen::Matrix<double, 8, 1> s = time_scale(T);
    const Eigen::Matrix<double, 8, 8> G = Ti7 * (s * s.transpose()).cwiseProduct(W);

    // Right end of piece i contributes to junction i (if interior).
    if (i < nj) {
      diag[i] += G.block<3, 3>(5, 5);
      lower[i] += G.block<3, 3>(5, 1);  // vs d_{i-1} (fixed start derivs when i==0)
      for (int ax = 0; ax < 3; ++ax) {
        rhs[i].col(ax) -= G.block<3, 1>(5, 0) * pos[i][ax];
        rhs[i].col(ax) -= G.block<3, 1>(5, 4) * pos[i + 1][ax];
      }
    }
    // Left end of piece i contributes to junction i-1 (if interior).
    if (i >= 1) {
      const std::size_t k = i - 1;
      diag[k] += G.block<3, 3>(1, 1);
      upper[k] += G.block<3, 3>(1, 5);  // vs d_{i} (fixed goal derivs when i==m-1)
      for (int ax = 0; ax < 3; ++ax) {
        rhs[k].col(ax) -= G.block<3, 1>(1, 0) * pos[i][ax];
        rhs[k].col(ax) -= G.block<3, 1>(1, 4) * pos[i + 1][ax];
      }
    }
  }

  // Fold the fixed boundary derivatives into the right-hand side.
  Eigen::Matrix3d d_start, d_goal;  // columns are axes; rows are (v, a, j)
  d_start << start.v.transpose(), start.a.transpose(), start.j.transpose();
  d_goal << goal.v.transpose(), goal.a.transpose(), goal.j.transpose();
  {
    const double T = durations[0];
    const Eigen::Matrix<double, 8, 1> s = time_scale(T);
    const Eigen::Matrix<double, 8, 8> G =
        (1.0 / std::pow(T, 7)) * (s * s.transpose()).cwiseProduct(W);
    rhs[0] -= G.block<3, 3>(5, 1) * d_start;
    lower[0].setZero();
  }
  {
    const double T = durations[m - 1];
    const Eigen::Matrix<double, 8, 1> s = time_scale(T);
    const Eigen::Matrix<double, 8, 8> G =
        (1.0 / std::pow(T, 7)) * (s * s.transpose()).cwiseProduct(W);
    rhs[nj - 1] -= G.block<3, 3>(1, 5) * d_goal;
    upper[nj - 1].setZero();
  }

  // Block-tridiagonal (Thomas) solve, shared across the three axes.
  std::vector<Eigen::Matrix3d> cp(nj);
  std::vector<Eigen::Matrix<double, 3, 3>> dp(nj);
  {
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(diag[0]);
    cp[0] = lu.solve(upper[0]);
    dp[0] = lu.solve(rhs[0]);
    for (std::size_t k = 1; k < nj; ++k) {
      const Eigen::Matrix3d denom = diag[k] - lower[k] * cp[k - 1];
      Eigen::PartialPivLU<Eigen::Matrix3d> lu_k(denom);
      cp[k] = lu_k.solve(upper[k]);
      dp[k] = lu_k.solve(rhs[k] - lower[k] * dp[k - 1]);
    }
  }
  std::vector<Eigen::Matrix<double, 3, 3>> d(nj);
  d[nj - 1] = dp[nj - 1];
  for (std::size_t k = nj - 1; k-- > 0;) {
    d[k] = dp[k] - cp[k] * d[k + 1];
  }

  std::vector<FlatState> states(m + 1);
  states[0] = start;
  states[m] = goal;
  for (std::size_t k = 0; k < nj; ++k) {
    FlatState s;
    s.p = pos[k + 1];
    s.v = d[k].row(0).transpose();
    s.a = d[k].row(1).transpose();
    s.j = d[k].row(2).transpose();
    states[k + 1] = s;
  }

  std::vector<PolyPiece> pieces;
  pieces.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    pieces.push_back(solve_boundary_polynomial(states[i], states[i + 1], durations[i]));
  }
  return PiecewiseTrajectory(std::move(pieces));
}

double snap_energy(const PiecewiseTrajectory& traj) {
  double total = 0.0;
  const double f[8] = {0, 0, 0, 0, 24, 120, 360, 840};
  for (const auto& piece : traj.pieces()) {
    const double T = piece.duration;
    // scaled coefficients c~_k = c_k T^k; energy = T^-7 c~' Q c~
    for (int ax = 0; ax < 3; ++ax) {
      double cs[8];
      double scale = 1.0;
      for (int k = 0; k < 8; ++k) {
        cs[k] = piece.coeffs(k, ax) * scale;
        scale *= T;
      }
      double e = 0.0;
      for (int k = 4; k < 8; ++k) {
        for (int l = 4; l < 8; ++l) {
          e += f[k] * f[l] / (k + l - 7) * cs[k] * cs[l];
        }
      }
      total += e / std::pow(T, 7);
    }
  }
  return total;
}

}  // namespace mrplan
