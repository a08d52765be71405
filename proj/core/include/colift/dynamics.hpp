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

#ifndef COLIFT_DYNAMICS_HPP_
#define COLIFT_DYNAMICS_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/kinematics.hpp"
#include "colift/resolved_model.hpp"
#include "colift/state.hpp"

namespace colift {

inline Eigen::Vector3d default_gravity() { return Eigen::Vector3d(0.0, 0.0, -9.81); }

/// Joint-space mass matrix M(q, pi), (6+n) x (6+n), symmetric positive
/// definite, mixed-velocity base block first. Mechanical inertia only; motor
/// rotor contributions live in motor_reflected_terms().
Eigen::MatrixXd mass_matrix(const ResolvedModel& model, const SystemState& state);

/// Bias forces h(q, nu, pi): Coriolis/centrifugal plus gravity, such that the
/// equations of motion read M(q) nudot + h(q, nu) = generalized forces.
Eigen::VectorXd bias_forces(const ResolvedModel& model, const SystemState& state,
                            const Eigen::Vector3d& gravity = default_gravity());

/// Diagonal transmission quantities of the motor set bound to the model.
struct MotorReflection {
  Eigen::VectorXd reflected_inertia;  // (1/Gamma)^2 I_m per joint, added to the M_s diagonal
  Eigen::VectorXd reflected_viscous;  // (1/Gamma)^2 K_v per joint
  Eigen::VectorXd input_scale;        // 1/Gamma per joint: joint torque per unit motor torque
};

/// For direct-driven models the transmission is the identity (scale 1, no
/// added inertia). Motor-actuated joints must carry a binding.
MotorReflection motor_reflected_terms(const ResolvedModel& model);

/// Mass matrix with the reflected rotor inertia folded into the joint block.
Eigen::MatrixXd augmented_mass_matrix(const ResolvedModel& model, const SystemState& state);

/// One external wrench applied at a named frame: force then moment about the
/// frame origin, both in world coordinates.
struct ContactWrench {
  std::string frame;
  Eigen::Matrix<double, 6, 1> wrench = Eigen::Matrix<double, 6, 1>::Zero();
};

/// Dynamics defect Mbar(q) nudot + h(q, nu) - Bbar tau - sum J_c^T f + Kbar_v nu.
/// Zero iff (q, nu, nudot, tau, f) satisfies the parametrized equations of
/// motion. `tau` holds motor torques for motor-driven models and joint
/// torques for direct-driven ones.
Eigen::VectorXd full_dynamics_residual(const ResolvedModel& model, const SystemState& state,
                                       const Eigen::VectorXd& tau,
                                       const std::vector<ContactWrench>& wrenches,
                                       const Eigen::Vector3d& gravity = default_gravity());

}  // namespace colift

#endif  // COLIFT_DYNAMICS_HPP_
