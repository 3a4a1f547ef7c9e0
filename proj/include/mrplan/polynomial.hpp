#pragma once

#include <string>
#include <vector>

#include "mrplan/geometry.hpp"

namespace mrplan {

// One degree-7 polynomial piece (s = 4). Row k of `coeffs` holds the
// coefficient of t^k for the three axes; t is piece-local in [0, duration].
struct PolyPiece {
  Eigen::Matrix<double, 8, 3> coeffs{Eigen::Matrix<double, 8, 3>::Zero()};
  double duration{0.0};

  // order-th time derivative at local time t (order 0..7).
  Vec3 eval(double t, int order) const;
  FlatState state(double t) const;
};

// Ordered pieces, continuous up to jerk at junctions.
class PiecewiseTrajectory {
 public:
  PiecewiseTrajectory() = default;
  explicit PiecewiseTrajectory(std::vector<PolyPiece> pieces);

  const std::vector<PolyPiece>& pieces() const { return pieces_; }
  std::size_t piece_count() const { return pieces_.size(); }
  double total_duration() const { return cum_.empty() ? 0.0 : cum_.back(); }
  // Start time of piece i on the global clock.
  double piece_start(std::size_t i) const { return i == 0 ? 0.0 : cum_[i - 1]; }

  // Piece index for global time t: right-open intervals, final endpoint
  // belongs to the last piece.
  std::size_t piece_index(double t) const;

  // order-th derivative at global time t (order 0..3 per the contract; higher
  // orders are accepted for internal use). Throws DomainError outside
  // [0, total] beyond a 1e-9 slack.
  Vec3 eval(double t, int order) const;
  FlatState state(double t) const;

  // Largest junction discontinuity over orders 0..3; 0 for < 2 pieces.
  double max_junction_jump() const;

 private:
  std::vector<PolyPiece> pieces_;
  std::vector<double> cum_;
};

// Unique degree-7 polynomial matching p, v, a, j at both ends.
// Solved in scaled time for conditioning; boundary conditions are reproduced
// to near machine precision for moderate T.
PolyPiece solve_boundary_polynomial(const FlatState& s0, const FlatState& s1, double T);

struct KinoReport {
  double max_v{0.0}, max_a{0.0}, max_j{0.0};
  // First violation time per quantity, < 0 when none.
  double t_v{-1.0}, t_a{-1.0}, t_j{-1.0};
  bool ok{true};
};

// Samples all derivatives on the closed time grid with step dt.
KinoReport check_kinodynamic(const PiecewiseTrajectory& traj, const KinoLimits& limits,
                             double dt = 1e-3);

// Obstacle-free global trajectory: single-piece boundary-value solve with the
// smallest duration (exponential growth + bisection, relative tolerance 1e-3)
// that satisfies the kinodynamic limits. `rho` is reserved for cost shaping
// and unused by the default search.
PiecewiseTrajectory lqmt_global(const FlatState& start, const FlatState& goal,
                                const KinoLimits& limits, double rho = 0.0);

// Concatenates parts; consecutive boundary states must match to 1e-6 per
// component, otherwise a StitchError names the junction and worst component.
PiecewiseTrajectory stitch(const std::vector<PiecewiseTrajectory>& parts);

}  // namespace mrplan
