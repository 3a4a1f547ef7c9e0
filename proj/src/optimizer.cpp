#include "mrplan/optimizer.hpp"

#include <cmath>
#include <deque>

#include "mrplan/errors.hpp"
#include "mrplan/flatness.hpp"
#include "mrplan/min_snap.hpp"

namespace mrplan {

namespace {

// C1-smoothed hinge: cubic ramp of width w, linear beyond.
double hinge(double x, double w = 1e-3) {
  if (x <= 0.0) return 0.0;
  if (x < w) return x * x * x / (3.0 * w * w);
  return x - w + w / 3.0;
}

struct Objective {
  const OptProblem* prob;
  double mu;
  int kappa;

  std::size_t pieces() const { return prob->corridor.size(); }
  std::size_t dim() const { return 3 * (pieces() - 1) + pieces(); }

  PiecewiseTrajectory build(const Eigen::VectorXd& x) const {
    const std::size_t m = pieces();
    std::vector<Vec3> q(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) q[k] = x.segment<3>(3 * k);
    std::vector<double> T(m);
    for (std::size_t i = 0; i < m; ++i) {
      T[i] = std::exp(std::clamp(x[3 * (m - 1) + i], -8.0, 8.0));
    }
    return min_snap_interpolate(prob->start, prob->goal, q, T);
  }

  // Objective value; optionally reports the worst raw constraint residual.
  double eval(const Eigen::VectorXd& x, double* worst_resid = nullptr) const {
    PiecewiseTrajectory traj;
    try {
      traj = build(x);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }

    double J = prob->weights.smooth * snap_energy(traj) +
               prob->weights.time * traj.total_duration();

    const Mat3 Q = prob->drone.shape();
    const KinoLimits& lim = prob->limits;
    const double v2 = lim.v_max * lim.v_max;
    const double a2 = lim.a_max * lim.a_max;
    const double j2 = lim.j_max * lim.j_max;

    double worst = -std::numeric_limits<double>::infinity();
    double penalty = 0.0;
    YawTracker yaw;

    for (std::size_t i = 0; i < traj.piece_count(); ++i) {
      const auto& piece = traj.pieces()[i];
      const auto& rows = prob->corridor.polys[i].rows;
      const double T = piece.duration;
      for (int s = 0; s <= kappa; ++s) {
        const double t = T * s / kappa;
        const double w = (s == 0 || s == kappa) ? 0.5 * T / kappa : T / kappa;
        const FlatState st = piece.state(t);

        penalty += w * hinge(st.v.squaredNorm() / v2 - 1.0 + 1e-3);
        penalty += w * hinge(st.a.squaredNorm() / a2 - 1.0 + 1e-3);
        penalty += w * hinge(st.j.squaredNorm() / j2 - 1.0 + 1e-3);

        if (prob->mode == PlanMode::R3) {
          for (const auto& r : rows) {
            const double res = r.normal.dot(st.p) - r.offset;
            worst = std::max(worst, res);
            penalty += w * hinge(res + prob->constraint_margin);
          }
        } else {
          const double psi = yaw.update(st.v);
          const Vec3 thrust = st.a + kGravity * Vec3::UnitZ();
          Mat3 R;
          if (thrust.norm() > 1e-3) {
            const Vec3 zb = thrust.normalized();
            const Vec3 xc(std::cos(psi), std::sin(psi), 0.0);
            Vec3 yb = zb.cross(xc);
            if (yb.norm() < 1e-6) {
              R = Mat3::Identity();
            } else {
              yb.normalize();
              R.col(0) = yb.cross(zb);
              R.col(1) = yb;
              R.col(2) = zb;
            }
          } else {
            R = Mat3::Identity();
          }
          for (const auto& r : rows) {
            const double res =
                (Q * (R.transpose() * r.normal)).norm() + r.normal.dot(st.p) - r.offset;
            worst = std::max(worst, res);
            penalty += w * hinge(res + prob->constraint_margin);
          }
        }
      }
    }
    if (worst_resid) *worst_resid = worst;
    J += mu * penalty;
    return J;
  }
};

Eigen::VectorXd numeric_gradient(const Objective& obj, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = obj.eval(xp);
    xp[i] = x[i] - h;
    const double fm = obj.eval(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

struct LbfgsOutcome {
  Eigen::VectorXd x;
  double f;
  bool converged;
  int iterations;
};

LbfgsOutcome lbfgs_minimize(const Objective& obj, Eigen::VectorXd x, int max_iters,
                            std::vector<TraceRow>* trace) {
  constexpr int kHistory = 8;
  std::deque<Eigen::VectorXd> S, Y;
  std::deque<double> rho;

  double f = obj.eval(x);
  if (!std::isfinite(f)) throw NumericalError("optimizer objective is non-finite at init");
  Eigen::VectorXd g = numeric_gradient(obj, x);

  LbfgsOutcome out{x, f, false, 0};
  int stall = 0;

  for (int iter = 0; iter < max_iters; ++iter) {
    out.iterations = iter + 1;
    if (trace) {
      double worst;
      obj.eval(x, &worst);
      trace->push_back(TraceRow{iter, f, worst});
    }
    if (g.cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, std::abs(f))) {
      out.converged = true;
      break;
    }

    // Two-loop recursion.
    Eigen::VectorXd d = -g;
    std::vector<double> alpha(S.size());
    for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
      alpha[k] = rho[k] * S[k].dot(d);
      d -= alpha[k] * Y[k];
    }
    if (!S.empty()) {
      const double gamma = S.back().dot(Y.back()) / Y.back().squaredNorm();
      d *= gamma;
    }
    for (std::size_t k = 0; k < S.size(); ++k) {
      const double beta = rho[k] * Y[k].dot(d);
      d += (alpha[k] - beta) * S[k];
    }
    d = -d;
    if (g.dot(d) >= 0.0) d = -g;  // safeguard

    // Armijo backtracking.
    const double slope = g.dot(d);
    double step = 1.0;
    double fn = std::numeric_limits<double>::infinity();
    Eigen::VectorXd xn;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = x + step * d;
      fn = obj.eval(xn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd gn = numeric_gradient(obj, xn);
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s);
      Y.push_back(y);
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > kHistory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }

    const double drop = f - fn;
    x = xn;
    f = fn;
    g = gn;
    if (drop < 1e-12 * (1.0 + std::abs(f))) {
      if (++stall >= 3) break;
    } else {
      stall = 0;
    }
  }
  out.x = x;
  out.f = f;
  return out;
}

void check_problem(const OptProblem& prob) {
  if (prob.corridor.empty()) throw CorridorError("optimize: empty corridor");
  if (!prob.limits.valid()) throw PreconditionError("optimize: invalid limits");
  if (!prob.start.finite() || !prob.goal.finite()) {
    throw PreconditionError("optimize: non-finite boundary state");
  }
  if (!prob.corridor.overlaps_ok(prob.drone.h)) {
    throw CorridorError("optimize: corridor violates its overlap invariant");
  }
  const double slack = prob.mode == PlanMode::SE3 ? prob.drone.h : prob.drone.r;
  if (!poly_contains(prob.corridor.polys.front(), prob.start.p, -slack)) {
    throw PreconditionError("optimize: start not inside the first polyhedron");
  }
  if (!poly_contains(prob.corridor.polys.back(), prob.goal.p, -slack)) {
    throw PreconditionError("optimize: goal not inside the last polyhedron");
  }
}

Eigen::VectorXd initial_guess(const OptProblem& prob, double nudge_sign) {
  const std::size_t m = prob.corridor.size();
  Eigen::VectorXd x(3 * (m - 1) + m);

  std::vector<Vec3> nodes(m + 1);
  nodes[0] = prob.start.p;
  nodes[m] = prob.goal.p;

  Vec3 lateral = (prob.goal.p - prob.start.p).normalized().cross(Vec3::UnitZ());
  if (lateral.norm() < 1e-6) lateral = Vec3::UnitX();
  lateral.normalize();

  for (std::size_t k = 0; k + 1 < m; ++k) {
    const auto ball =
        intersection_ball(prob.corridor.polys[k], prob.corridor.polys[k + 1]);
    Vec3 q = ball ? ball->center
                  : (prob.start.p + (prob.goal.p - prob.start.p) * (k + 1.0) / m);
    if (prob.mode == PlanMode::SE3) {
      // Deterministic symmetry breaking: the level-attitude configuration is
      // a saddle of the whole-body penalty, alternate lateral nudges seed the
      // roll direction.
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      q += nudge_sign * sgn * 0.25 * prob.drone.h * lateral;
    }
    nodes[k + 1] = q;
    x.segment<3>(3 * k) = q;
  }

  const double v_ref = std::max(0.5 * prob.limits.v_max, 0.1);
  for (std::size_t i = 0; i < m; ++i) {
    const double len = (nodes[i + 1] - nodes[i]).norm();
    x[3 * (m - 1) + i] = std::log(std::max(0.1, len / v_ref));
  }
  return x;
}

}  // namespace

OptResult optimize_trajectory(const OptProblem& prob) {
  check_problem(prob);

  OptResult result;
  Objective obj{&prob, prob.weights.penalty, prob.samples_per_piece};
  Eigen::VectorXd x = initial_guess(prob, +1.0);

  const int attempts = 1 + std::max(0, prob.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      obj.mu *= 10.0;
      obj.kappa *= 2;
      // Halfway through the retries, restart from the mirrored nudge in case
      // the first roll direction was the wrong basin.
      if (attempt == 2) x = initial_guess(prob, -1.0);
    }

    const LbfgsOutcome run = lbfgs_minimize(
        obj, x, prob.max_iterations, prob.record_trace ? &result.trace : nullptr);
    x = run.x;

    result.traj = obj.build(x);
    result.converged = run.converged;
    result.objective = run.f;
    result.iterations += run.iterations;
    result.attempts = attempt + 1;
    result.report = validate_trajectory(result.traj, prob.corridor, prob.drone, prob.mode,
                                        prob.limits, 1e-3);
    if (result.report.pass) {
      result.verified = true;
      return result;
    }
  }
  result.verified = false;
  return result;
}

}  // namespace mrplan
