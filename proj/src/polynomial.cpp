#include "mrplan/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mrplan/errors.hpp"

namespace mrplan {

namespace {

// d^order/dt^order of t^k evaluated with Horner over the surviving terms.
Vec3 eval_coeffs(const Eigen::Matrix<double, 8, 3>& c, double t, int order) {
  if (order > 7) return Vec3::Zero();
  // factor k!/(k-order)! for each surviving power
  Vec3 acc = Vec3::Zero();
  for (int k = 7; k >= order; --k) {
    double f = 1.0;
    for (int m = 0; m < order; ++m) f *= (k - m);
    acc = acc * t + f * c.row(k).transpose();
  }
  return acc;
}

}  // namespace

Vec3 PolyPiece::eval(double t, int order) const {
  if (order < 0) throw DomainError("derivative order must be >= 0");
  return eval_coeffs(coeffs, t, order);
}

FlatState PolyPiece::state(double t) const {
  FlatState s;
  s.p = eval(t, 0);
  s.v = eval(t, 1);
  s.a = eval(t, 2);
  s.j = eval(t, 3);
  return s;
}

PiecewiseTrajectory::PiecewiseTrajectory(std::vector<PolyPiece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InvalidInputError("trajectory needs at least one piece");
  cum_.reserve(pieces_.size());
  double acc = 0.0;
  for (const auto& p : pieces_) {
    if (!(p.duration > 0.0)) throw InvalidInputError("piece duration must be > 0");
    acc += p.duration;
    cum_.push_back(acc);
  }
}

std::size_t PiecewiseTrajectory::piece_index(double t) const {
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  if (i >= pieces_.size()) i = pieces_.size() - 1;
  return i;
}

Vec3 PiecewiseTrajectory::eval(double t, int order) const {
  const double total = total_duration();
  if (t < -1e-9 || t > total + 1e-9) {
    throw DomainError("trajectory evaluated outside [0, total duration]");
  }
  t = std::clamp(t, 0.0, total);
  const std::size_t i = piece_index(t);
  return pieces_[i].eval(t - piece_start(i), order);
}

FlatState PiecewiseTrajectory::state(double t) const {
  FlatState s;
  s.p = eval(t, 0);
  s.v = eval(t, 1);
  s.a = eval(t, 2);
  s.j = eval(t, 3);
  return s;
}

double PiecewiseTrajectory::max_junction_jump() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const FlatState a = pieces_[i].state(pieces_[i].duration);
    const FlatState b = pieces_[i + 1].state(0.0);
    worst = std::max(worst, a.max_diff(b));
  }
  return worst;
}

PolyPiece solve_boundary_polynomial(const FlatState& s0, const FlatState& s1, double T) {
  if (!(T > 0.0)) throw PreconditionError("boundary solve requires T > 0");
  if (!s0.finite() || !s1.finite()) throw InvalidInputError("non-finite boundary state");

  // Scaled time tau = t/T. Lower coefficients come straight from the left
  // state; the upper four solve a constant 4x4 system (conditions at tau=1).
  static const Eigen::Matrix4d kEndInv = [] {
    Eigen::Matrix4d m;
    m << 1, 1, 1, 1,          // position at tau=1
        4, 5, 6, 7,           // velocity
        12, 20, 30, 42,       // acceleration
        24, 60, 120, 210;     // jerk
    return Eigen::Matrix4d(m.inverse());
  }();

  PolyPiece piece;
  piece.duration = T;
  const double T2 = T * T, T3 = T2 * T;

  for (int ax = 0; ax < 3; ++ax) {
    Eigen::Matrix<double, 8, 1> cs;  // scaled-time coefficients
    cs[0] = s0.p[ax];
    cs[1] = s0.v[ax] * T;
    cs[2] = s0.a[ax] * T2 / 2.0;
    cs[3] = s0.j[ax] * T3 / 6.0;

    Eigen::Vector4d rhs;
    rhs[0] = s1.p[ax] - (cs[0] + cs[1] + cs[2] + cs[3]);
    rhs[1] = s1.v[ax] * T - (cs[1] + 2 * cs[2] + 3 * cs[3]);
    rhs[2] = s1.a[ax] * T2 - (2 * cs[2] + 6 * cs[3]);
    rhs[3] = s1.j[ax] * T3 - (6 * cs[3]);
    cs.tail<4>() = kEndInv * rhs;

    double scale = 1.0;
    for (int k = 0; k < 8; ++k) {
      piece.coeffs(k, ax) = cs[k] * scale;
      scale /= T;
    }
  }
  return piece;
}

KinoReport check_kinodynamic(const PiecewiseTrajectory& traj, const KinoLimits& limits,
                             double dt) {
  if (!(dt > 0.0)) throw PreconditionError("check step must be > 0");
  KinoReport rep;
  const double total = traj.total_duration();
  const std::size_t n = static_cast<std::size_t>(std::ceil(total / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = std::min(k * dt, total);
    const double nv = traj.eval(t, 1).norm();
    const double na = traj.eval(t, 2).norm();
    const double nj = traj.eval(t, 3).norm();
    rep.max_v = std::max(rep.max_v, nv);
    rep.max_a = std::max(rep.max_a, na);
    rep.max_j = std::max(rep.max_j, nj);
    if (nv > limits.v_max && rep.t_v < 0) rep.t_v = t;
    if (na > limits.a_max && rep.t_a < 0) rep.t_a = t;
    if (nj > limits.j_max && rep.t_j < 0) rep.t_j = t;
  }
  rep.ok = rep.t_v < 0 && rep.t_a < 0 && rep.t_j < 0;
  return rep;
}

namespace {

bool lqmt_feasible(const FlatState& a, const FlatState& b, double T,
                   const KinoLimits& limits, double dt) {
  const PiecewiseTrajectory traj({solve_boundary_polynomial(a, b, T)});
  return check_kinodynamic(traj, limits, dt).ok;
}

}  // namespace

PiecewiseTrajectory lqmt_global(const FlatState& start, const FlatState& goal,
                                const KinoLimits& limits, double /*rho*/) {
  if (!limits.valid()) throw PreconditionError("invalid kinodynamic limits");

  constexpr double kFloor = 0.1;   // minimal duration for degenerate requests
  constexpr double kCap = 600.0;   // give up beyond this duration

  // Coarse step during the search, full 1 kHz verification at the end.
  const auto search_dt = [](double T) { return std::max(1e-3, T / 2000.0); };

  double hi = kFloor;
  if (!lqmt_feasible(start, goal, hi, limits, search_dt(hi))) {
    double lo = hi;
    bool found = false;
    while (hi < kCap) {
      hi *= 2.0;
      if (lqmt_feasible(start, goal, hi, limits, search_dt(hi))) {
        found = true;
        break;
      }
      lo = hi;
    }
    if (!found) throw InfeasibleError("lqmt: no feasible duration below cap");
    while ((hi - lo) / hi > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      if (lqmt_feasible(start, goal, mid, limits, search_dt(mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }

  // Final verification at the contract step; nudge up if the coarse search
  // was marginally optimistic.
  for (int attempt = 0; attempt < 40; ++attempt) {
    const PiecewiseTrajectory traj({solve_boundary_polynomial(start, goal, hi)});
    if (check_kinodynamic(traj, limits, 1e-3).ok) return traj;
    hi *= 1.01;
  }
  throw InfeasibleError("lqmt: duration verification failed to converge");
}

PiecewiseTrajectory stitch(const std::vector<PiecewiseTrajectory>& parts) {
  if (parts.empty()) throw InvalidInputError("stitch needs at least one part");
  if (parts.size() == 1) return parts.front();

  constexpr double kTol = 1e-6;
  static const char* kComp[4] = {"p", "v", "a", "j"};

  std::vector<PolyPiece> pieces;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const FlatState a = parts[i].state(parts[i].total_duration());
    const FlatState b = parts[i + 1].state(0.0);
    const double diffs[4] = {(a.p - b.p).cwiseAbs().maxCoeff(),
                             (a.v - b.v).cwiseAbs().maxCoeff(),
                             (a.a - b.a).cwiseAbs().maxCoeff(),
                             (a.j - b.j).cwiseAbs().maxCoeff()};
    int worst = 0;
    for (int k = 1; k < 4; ++k) {
      if (diffs[k] > diffs[worst]) worst = k;
    }
    if (diffs[worst] > kTol) {
      throw StitchError("stitch mismatch at junction " + std::to_string(i) +
                        ", component " + kComp[worst] + ", magnitude " +
                        std::to_string(diffs[worst]));
    }
  }
  for (const auto& part : parts) {
    pieces.insert(pieces.end(), part.pieces().begin(), part.pieces().end());
  }
  return PiecewiseTrajectory(std::move(pieces));
}

}  // namespace mrplan
