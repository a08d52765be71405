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

#ifndef COLIFT_IPM_SOLVER_HPP_
#define COLIFT_IPM_SOLVER_HPP_

#include <Eigen/Dense>
#include <functional>
#include <limits>

namespace colift {

enum class SolveStatus {
  kSolved,
  kInfeasible,
  kMaxIterations,
};

const char* to_string(SolveStatus status);

// Problem   min f(x)  s.t.  c_E(x) = 0,  A_I x <= b_I.
//
// Inequalities are restricted to constant linear rows; that covers joint and
// torque bounds plus friction/CoP pyramids, and lets the solver keep them
// strictly feasible with slacks while only the equalities need callbacks.
// objective_hessian may be any positive-semidefinite approximation (e.g.
// Gauss-Newton); the solver adds its own inertia regularization.
struct NlpFunctions {
  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> objective_gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> objective_hessian;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> equalities;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> equalities_jacobian;
  Eigen::MatrixXd ineq_matrix;  // may have zero rows
  Eigen::VectorXd ineq_bound;
};

struct IpmOptions {
  double tol_feas = 1e-6;
  double tol_stat = 1e-6;
  int max_iterations = 400;
  double mu_init = 1e-1;
  double mu_min = 1e-10;
  // Gauss-Newton sweeps on ||c_E||^2 before the barrier iterations start.
  int presolve_iterations = 15;
  int stall_iterations = 30;
  bool verbose = false;
};

struct IpmResult {
  Eigen::VectorXd x;
  Eigen::VectorXd eq_multipliers;
  Eigen::VectorXd ineq_multipliers;
  SolveStatus status = SolveStatus::kMaxIterations;
  int iterations = 0;
  // max over |c_E| and positive parts of A_I x - b_I at the returned point.
  double max_violation = std::numeric_limits<double>::infinity();
  double objective = std::numeric_limits<double>::quiet_NaN();
};

IpmResult solve_nlp(const NlpFunctions& fns, const Eigen::VectorXd& x0,
                    const IpmOptions& options = {});

}  // namespace colift

#endif  // COLIFT_IPM_SOLVER_HPP_
