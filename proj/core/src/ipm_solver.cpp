// Copyright 2026 The Colift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "colift/ipm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

namespace colift {
namespace {

constexpr double kBoundaryMargin = 0.995;
constexpr double kDualReg = 1e-8;
// Baseline curvature added to the condensed Hessian. Cost-flat, constraint-
// flat directions (a rigid translation of a whole free-floating assembly)
// would otherwise make the KKT matrix exactly singular.
constexpr double kPrimalRegFloor = 1e-8;
constexpr double kArmijo = 1e-4;

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double one_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().sum();
}

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Trial-point evaluations may throw (e.g. a degenerate quaternion inside a
// model callback) or produce NaN; both just mean "reject this trial".
double guarded_objective(const NlpFunctions& fns, const Eigen::VectorXd& x) {
  try {
    double f = fns.objective(x);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
}

double guarded_eq_norm1(const NlpFunctions& fns, const Eigen::VectorXd& x,
                        Eigen::VectorXd* c_out) {
  try {
    Eigen::VectorXd c = fns.equalities(x);
    if (!finite(c)) return std::numeric_limits<double>::infinity();
    if (c_out) *c_out = c;
    return one_norm(c);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSolved:
      return "solved";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kMaxIterations:
      return "max-iterations";
  }
  return "unknown";
}

IpmResult solve_nlp(const NlpFunctions& fns, const Eigen::VectorXd& x0,
                    const IpmOptions& options) {
  const int n = static_cast<int>(x0.size());
  const Eigen::MatrixXd& A = fns.ineq_matrix;
  const Eigen::VectorXd& b = fns.ineq_bound;
  const int mi = static_cast<int>(A.rows());

  Eigen::VectorXd x = x0;

  // Feasibility presolve: damped Gauss-Newton on ||c_E||^2. The barrier
  // iterations behave much better when started near the constraint manifold.
  {
    Eigen::VectorXd c;
    double cn = guarded_eq_norm1(fns, x, &c);
    for (int it = 0; it < options.presolve_iterations && std::isfinite(cn); ++it) {
      if (c.size() == 0 || c.squaredNorm() < 1e-16) break;
      Eigen::MatrixXd je = fns.equalities_jacobian(x);
      Eigen::MatrixXd jtj = je.transpose() * je;
      double damp = 1e-8 * std::max(1.0, jtj.diagonal().maxCoeff());
      jtj.diagonal().array() += damp;
      Eigen::VectorXd dx = jtj.ldlt().solve(-je.transpose() * c);
      if (!finite(dx)) break;
      double f0 = c.squaredNorm();
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        Eigen::VectorXd ct;
        double n1 = guarded_eq_norm1(fns, x + alpha * dx, &ct);
        if (std::isfinite(n1) && ct.squaredNorm() < f0) {
          x += alpha * dx;
          c = ct;
          cn = n1;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
  }

  const int me_probe = static_cast<int>(fns.equalities(x).size());
  const int me = me_probe;

  // Slack/dual initialization.
  double mu = options.mu_init;
  Eigen::VectorXd s, z;
  if (mi > 0) {
    Eigen::VectorXd ci = A * x - b;
    s = (-ci).cwiseMax(1e-3);
    z = (mu * s.cwiseInverse()).cwiseMax(1e-8).cwiseMin(1e8);
  }
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(me);

  double delta_w = 0.0;
  double rho = 10.0;
  double best_feas = std::numeric_limits<double>::infinity();
  int stall = 0;

  IpmResult result;
  result.x = x;
  result.eq_multipliers = lam;
  result.ineq_multipliers = z;

  auto report_point = [&](const Eigen::VectorXd& xv) {
    result.x = xv;
    result.eq_multipliers = lam;
    result.ineq_multipliers = z;
    Eigen::VectorXd c;
    double feas_e = 0.0;
    if (std::isfinite(guarded_eq_norm1(fns, xv, &c))) feas_e = inf_norm(c);
    double feas_i = 0.0;
    if (mi > 0) feas_i = std::max(0.0, (A * xv - b).maxCoeff());
    result.max_violation = std::max(feas_e, feas_i);
    result.objective = guarded_objective(fns, xv);
  };

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    Eigen::VectorXd g = fns.objective_gradient(x);
    Eigen::VectorXd ce = fns.equalities(x);
    Eigen::MatrixXd je = fns.equalities_jacobian(x);
    if (!finite(g) || !finite(ce) || !je.allFinite()) break;

    Eigen::VectorXd resid_i;  // A x - b + s
    if (mi > 0) resid_i = A * x - b + s;

    Eigen::VectorXd grad_l = g + je.transpose() * lam;
    if (mi > 0) grad_l += A.transpose() * z;

    double mult_scale =
        std::max(100.0, (one_norm(lam) + one_norm(z)) / std::max(1, me + mi)) / 100.0;
    double err_stat = inf_norm(grad_l) / mult_scale;
    double err_eq = inf_norm(ce);
    double err_in = mi > 0 ? inf_norm(resid_i) : 0.0;

    // Dependent equality rows let lambda drift along directions with
    // J_E^T lambda ~ 0; the drift hurts nothing primal but wrecks the
    // stationarity test, which in turn freezes the barrier schedule and
    // inflates the penalty weight. Near feasibility, re-estimate the duals
    // by least squares and keep whichever set scores better.
    if (me > 0 && err_eq < 1e-3 && err_stat > options.tol_stat) {
      Eigen::VectorXd target = -g;
      if (mi > 0) target -= A.transpose() * z;
      // Rank-revealing QR: normal equations with a Tikhonov shift bias the
      // duals by shift/sigma_min^2, which is enough to miss tol_stat.
      Eigen::VectorXd lam_ls =
          Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(je.transpose()).solve(target);
      Eigen::VectorXd grad_ls = g + je.transpose() * lam_ls;
      if (mi > 0) grad_ls += A.transpose() * z;
      double scale_ls =
          std::max(100.0, (one_norm(lam_ls) + one_norm(z)) / std::max(1, me + mi)) / 100.0;
      double err_ls = inf_norm(grad_ls) / scale_ls;
      if (err_ls < err_stat) {
        lam = lam_ls;
        grad_l = grad_ls;
        mult_scale = scale_ls;
        err_stat = err_ls;
      }
    }
    double err_comp0 =
        mi > 0 ? inf_norm(s.cwiseProduct(z)) / mult_scale : 0.0;

    if (options.verbose) {
      std::printf("ipm %3d  f=% .6e  eq=%.2e in=%.2e stat=%.2e comp=%.2e mu=%.1e dw=%.1e",
                  iter, guarded_objective(fns, x), err_eq, err_in, err_stat, err_comp0, mu,
                  delta_w);
      if (me > 0 && std::getenv("COLIFT_IPM_RANK")) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(je.transpose());
        int stat_arg = 0;
        grad_l.cwiseAbs().maxCoeff(&stat_arg);
        std::printf("  rankJE=%d/%d  |lam|=%.2e  stat@%d", static_cast<int>(qr.rank()), me,
                    inf_norm(lam), stat_arg);
      }
      std::printf("\n");
    }

    // "Solved" also demands the true inequalities hold with no violation at
    // all, not just the slack identity: the slacks keep every A x <= b row
    // strictly interior, so a converged point ends up strictly feasible.
    double true_in = mi > 0 ? std::max(0.0, (A * x - b).maxCoeff()) : 0.0;
    if (err_eq <= options.tol_feas && err_in <= options.tol_feas && true_in <= 0.0 &&
        err_stat <= options.tol_stat && err_comp0 <= options.tol_stat) {
      result.status = SolveStatus::kSolved;
      result.iterations = iter;
      report_point(x);
      return result;
    }

    // Fiacco-McCormick: tighten the barrier once the current subproblem is
    // solved to within 10*mu.
    if (mi > 0) {
      for (int guard = 0; guard < 50; ++guard) {
        double err_comp_mu =
            inf_norm((s.cwiseProduct(z).array() - mu).matrix()) / mult_scale;
        double e_mu = std::max({err_stat, err_eq, err_in, err_comp_mu});
        if (e_mu > 10.0 * mu || mu <= options.mu_min) break;
        mu = std::max(options.mu_min, std::min(0.2 * mu, std::pow(mu, 1.5)));
      }
    }

    Eigen::MatrixXd h = fns.objective_hessian(x);

    // Condensed primal-dual step with inertia regularization; retry with a
    // larger delta_w whenever the step fails the line search.
    bool step_accepted = false;
    double delta_c = kDualReg;
    for (int attempt = 0; attempt < 12 && !step_accepted; ++attempt) {
      Eigen::MatrixXd hbar = h;
      if (mi > 0) {
        Eigen::VectorXd w = z.cwiseQuotient(s);
        hbar.noalias() += A.transpose() * w.asDiagonal() * A;
      }
      hbar.diagonal().array() += std::max(delta_w, kPrimalRegFloor);

      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + me, n + me);
      kkt.topLeftCorner(n, n) = hbar;
      if (me > 0) {
        kkt.topRightCorner(n, me) = je.transpose();
        kkt.bottomLeftCorner(me, n) = je;
        kkt.bottomRightCorner(me, me).diagonal().array() = -delta_c;
      }

      Eigen::VectorXd rhs(n + me);
      Eigen::VectorXd rx = -g - je.transpose() * lam;
      if (mi > 0)
        rx -= A.transpose() *
              ((mu * s.cwiseInverse()) + z.cwiseProduct(resid_i).cwiseQuotient(s));
      rhs.head(n) = rx;
      if (me > 0) rhs.tail(me) = -ce;

      Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
      if (!finite(sol)) {
        delta_w = delta_w == 0.0 ? 1e-8 : delta_w * 10.0;
        continue;
      }
      Eigen::VectorXd dx = sol.head(n);
      Eigen::VectorXd dlam = me > 0 ? Eigen::VectorXd(sol.tail(me))
                                    : Eigen::VectorXd();
      // Redundant (linearly dependent) equality rows push the dual step to
      // residual / delta_c; damp the dual block instead of chasing it.
      if (me > 0 && inf_norm(dlam) > 1e4 * (10.0 + inf_norm(lam))) {
        delta_c *= 100.0;
        continue;
      }
      Eigen::VectorXd ds, dz;
      if (mi > 0) {
        ds = -resid_i - A * dx;
        dz = (mu * s.cwiseInverse()) - z +
             z.cwiseProduct(resid_i + A * dx).cwiseQuotient(s);
      }

      // Fraction-to-boundary limits.
      double alpha_max = 1.0;
      double alpha_z = 1.0;
      for (int i = 0; i < mi; ++i) {
        if (ds(i) < 0.0) alpha_max = std::min(alpha_max, -kBoundaryMargin * s(i) / ds(i));
        if (dz(i) < 0.0) alpha_z = std::min(alpha_z, -kBoundaryMargin * z(i) / dz(i));
      }

      // Exact-penalty weight must dominate the multipliers.
      double mult_peak = inf_norm(lam) + inf_norm(z);
      if (me > 0) mult_peak = std::max(mult_peak, inf_norm(lam + dlam));
      if (mi > 0) mult_peak = std::max(mult_peak, inf_norm(z + dz));
      // Fresh each step (not ratcheted): a transient multiplier spike must
      // not poison the line search for the rest of the run.
      rho = 2.0 * mult_peak + 10.0;

      double infeas1 = one_norm(ce) + (mi > 0 ? one_norm(resid_i) : 0.0);
      double barrier0 = 0.0;
      if (mi > 0) barrier0 = -mu * s.array().log().sum();
      double f0 = guarded_objective(fns, x);
      double merit0 = f0 + barrier0 + rho * infeas1;
      double dirderiv = g.dot(dx) - rho * infeas1;
      if (mi > 0) dirderiv -= mu * ds.cwiseQuotient(s).sum();

      if (dirderiv > -1e-14 && infeas1 <= 1e-12) {
        // No descent available near a feasible point: convexify harder.
        delta_w = delta_w == 0.0 ? 1e-8 : delta_w * 10.0;
        continue;
      }

      double alpha = alpha_max;
      for (int ls = 0; ls < 30; ++ls) {
        Eigen::VectorXd xt = x + alpha * dx;
        Eigen::VectorXd ct;
        double ce1 = guarded_eq_norm1(fns, xt, &ct);
        double ft = guarded_objective(fns, xt);
        double merit_t = std::numeric_limits<double>::infinity();
        if (std::isfinite(ce1) && std::isfinite(ft)) {
          double barrier_t = 0.0;
          double in1 = 0.0;
          if (mi > 0) {
            Eigen::VectorXd st = s + alpha * ds;
            barrier_t = -mu * st.array().log().sum();
            in1 = (1.0 - alpha) * one_norm(resid_i);
          }
          merit_t = ft + barrier_t + rho * (ce1 + in1);
        }
        if (merit_t <= merit0 + kArmijo * alpha * std::min(dirderiv, 0.0)) {
          x = xt;
          if (mi > 0) {
            s += alpha * ds;
            z += alpha_z * dz;
            z = z.cwiseMax(1e-14);
          }
          if (me > 0) lam += alpha * dlam;
          step_accepted = true;

          double step_size = alpha * inf_norm(dx);
          double feas_now = err_eq + err_in;
          if (feas_now < best_feas - 1e-12) {
            best_feas = feas_now;
            stall = 0;
          } else if (step_size < 1e-11) {
            ++stall;
          }
          break;
        }
        alpha *= 0.5;
        if (alpha < 1e-12) break;
      }

      if (!step_accepted) {
        delta_w = delta_w == 0.0 ? 1e-8 : delta_w * 10.0;
        if (delta_w > 1e12) break;
      } else {
        delta_w = delta_w < 1e-14 ? 0.0 : delta_w / 3.0;
      }
    }

    if (!step_accepted) {
      ++stall;
      if (stall < 5) {
        delta_w = 0.0;  // one fresh attempt from scratch next iteration
        continue;
      }
      break;
    }

    if (stall >= options.stall_iterations) break;
  }

  result.iterations = iter;
  report_point(x);
  result.status = result.max_violation > options.tol_feas
                      ? SolveStatus::kInfeasible
                      : SolveStatus::kMaxIterations;
  return result;
}

}  // namespace colift
