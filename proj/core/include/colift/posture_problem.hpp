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

#ifndef COLIFT_POSTURE_PROBLEM_HPP_
#define COLIFT_POSTURE_PROBLEM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/composite.hpp"
#include "colift/friction.hpp"
#include "colift/ipm_solver.hpp"

namespace colift {

// What one lifting task asks for: hold the box level at each listed height,
// keep feet flat on the ground, stay close to the reference joint postures.
struct TaskSpec {
  std::vector<double> load_heights;  // strictly increasing, meters
  Eigen::VectorXd human_reference;   // joint regularization target s*
  Eigen::VectorXd robot_reference;
  Eigen::Matrix3d ground_rotation = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d load_rotation = Eigen::Matrix3d::Identity();
  // Environment-contact frames are pinned to Rz(yaw) * ground_rotation so the
  // two agents can face each other across the load.
  double human_yaw = 0.0;
  double robot_yaw = 0.0;
  // Pins the load's first-height x/y. Without it the whole scene can slide
  // along the horizontal translation null space, which costs nothing but lets
  // solutions wander arbitrarily far from the placement guess.
  Eigen::Vector2d load_xy = Eigen::Vector2d::Zero();
};

struct CostWeights {
  double torque_weight = 1.0;       // weighted squared torque norm per height
  double posture_weight = 1e-2;     // squared distance to reference joints
  double continuity_weight = 1e-2;  // squared change between adjacent heights
  double fitness_scale = 100.0;     // numerator of the design fitness
  // Tiny Tikhonov term on the contact wrenches. Internal force distributions
  // (e.g. a squeeze between two grasps) are torque-neutral, so without this
  // the reduced problem has flat directions.
  double wrench_reg = 1e-8;
  // Per-entry scaling of the stacked torque vector (robot motor torques
  // first, then human joints). Empty selects the joint-scale default: the
  // transmission ratio for motor entries, 1 for human entries, so both kinds
  // enter the cost at comparable magnitude.
  Eigen::VectorXd torque_scaling;
};

// Variable layout per height: [q_human (7+n1), q_robot (7+n2), q_load (7),
// torques (n2+n1), wrenches (6 per contact)], heights stacked in order.
// Velocities and accelerations are identically zero in a static posture and
// are eliminated rather than carried as variables.
struct ProblemLayout {
  int n1 = 0;
  int n2 = 0;
  int num_contacts = 0;
  int num_env = 0;
  int num_heights = 0;

  int pose_size() const { return 21 + n1 + n2; }  // the three q blocks
  int torque_size() const { return n1 + n2; }
  int wrench_size() const { return 6 * num_contacts; }
  int height_size() const { return pose_size() + torque_size() + wrench_size(); }
  int variable_count() const { return num_heights * height_size(); }

  int height_offset(int k) const { return k * height_size(); }
  int human_q_offset(int k) const { return height_offset(k); }
  int robot_q_offset(int k) const { return height_offset(k) + 7 + n1; }
  int load_q_offset(int k) const { return height_offset(k) + 14 + n1 + n2; }
  int torque_offset(int k) const { return height_offset(k) + pose_size(); }
  int wrench_offset(int k) const { return torque_offset(k) + torque_size(); }
};

struct StaticPostureProblem {
  ResolvedComposite system;
  TaskSpec task;
  CostWeights weights;  // torque_scaling resolved to a concrete vector
  FrictionModel friction;  // rows over a single height's wrench block
  ProblemLayout layout;

  // Equality registry: named row blocks in assembly order. height == -1
  // marks the inter-height rows appended after all per-height blocks.
  struct RowBlock {
    std::string family;
    int height = 0;
    int offset = 0;
    int rows = 0;
  };
  std::vector<RowBlock> equality_blocks;
  int num_equalities = 0;

  // Constant linear inequalities over the full variable vector:
  // joint limits, torque limits, and the friction/CoP rows per height.
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_bound;

  int variable_count() const { return layout.variable_count(); }
  int equality_count() const { return num_equalities; }
  int inequality_count() const { return static_cast<int>(ineq_matrix.rows()); }
};

StaticPostureProblem build_problem(const CompositeSystem& system,
                                   const HardwareParams& robot_params, const TaskSpec& task,
                                   const CostWeights& weights);

// Initial guess, one state per body; the load's height is overridden per
// height target. Restarts perturb this guess deterministically.
struct PostureInit {
  SystemState human;
  SystemState robot;
  SystemState load;
};

struct PostureSolverOptions {
  double tol_feas = 1e-6;
  double tol_stat = 1e-6;
  int max_iterations = 400;
  int max_restarts = 3;
  std::uint64_t seed = 0;
};

struct HeightPosture {
  SystemState human;
  SystemState robot;
  SystemState load;
  Eigen::VectorXd torques;   // robot motor torques then human joint torques
  Eigen::VectorXd wrenches;  // 6 per contact, force-on-owner, world coords
};

struct PostureSolution {
  SolveStatus status = SolveStatus::kMaxIterations;
  std::vector<HeightPosture> heights;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double max_violation = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int restarts_used = 0;
  Eigen::VectorXd variables;  // raw solver variables for round-trips
};

PostureSolution solve_posture(const StaticPostureProblem& problem, const PostureInit& init,
                              const PostureSolverOptions& options = {});

// Cost recomputation from a stored solution; matches the solver-reported
// objective. Requires status == solved.
struct CostBreakdown {
  std::vector<double> torque_terms;      // per height
  std::vector<double> posture_terms;     // per height
  std::vector<double> continuity_terms;  // per adjacent pair
  double wrench_reg_term = 0.0;
  double objective = 0.0;
};
CostBreakdown evaluate_costs(const StaticPostureProblem& problem,
                             const PostureSolution& solution);

// Re-checks every constraint family with independent evaluators built on the
// public kinematics/dynamics entry points (never the solver workspace).
struct FamilyCheck {
  std::string family;
  double worst = 0.0;  // residual magnitude or clamped violation
};
struct ConstraintReport {
  std::vector<FamilyCheck> families;
  double max_violation = 0.0;
};
ConstraintReport verify_solution(const StaticPostureProblem& problem,
                                 const PostureSolution& solution);

Eigen::VectorXd pack_variables(const StaticPostureProblem& problem,
                               const std::vector<HeightPosture>& heights);
std::vector<HeightPosture> unpack_variables(const StaticPostureProblem& problem,
                                            const Eigen::VectorXd& x);

// Raw equality residuals / Jacobian at an arbitrary variable vector, rows
// ordered as in equality_blocks. This is the function the solver drives to
// zero; exposed so properties can be probed row by row.
Eigen::VectorXd equality_residuals(const StaticPostureProblem& problem,
                                   const Eigen::VectorXd& x);
Eigen::MatrixXd equality_jacobian(const StaticPostureProblem& problem,
                                  const Eigen::VectorXd& x);

}  // namespace colift

#endif  // COLIFT_POSTURE_PROBLEM_HPP_
