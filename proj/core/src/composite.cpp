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

#include "colift/composite.hpp"

#include "colift/errors.hpp"
#include "colift/kinematics.hpp"

namespace colift {

DiagnosticList CompositeSystem::validate() const {
  DiagnosticList diags;
  auto add = [&diags](const std::string& code, const std::string& msg) {
    diags.push_back({code, msg});
  };

  for (const auto& model : {&human, &robot, &load}) {
    for (const auto& d : model->validate()) {
      add(d.code, model->name + ": " + d.message);
    }
  }
  if (load.num_joints() != 0) add("E_LOAD_NOT_RIGID", "load must be a single rigid body");
  if (robot.actuation != ActuationKind::kMotor) {
    add("E_ROBOT_NOT_MOTORIZED", "robot model must declare motor actuation");
  }

  for (const auto& c : contacts) {
    if (c.owner == AgentRole::kLoad) {
      add("E_CONTACT_OWNER", "contacts are owned by the human or the robot, not the load");
      continue;
    }
    const KinematicModel& owner = c.owner == AgentRole::kHuman ? human : robot;
    if (!owner.has_frame(c.frame)) {
      add("E_CONTACT_FRAME", "contact frame not found on owner: " + c.frame);
    }
    if (c.kind == ContactKind::kGrasp) {
      if (!load.has_frame(c.paired_load_frame)) {
        add("E_GRASP_LOAD_FRAME", "grasp load frame not found: " + c.paired_load_frame);
      }
      if (c.wrench_dofs != 3 && c.wrench_dofs != 6) {
        add("E_GRASP_DOFS", "grasp wrench_dofs must be 3 or 6");
      }
    } else {
      if (!(c.friction > 0.0)) add("E_CONTACT_FRICTION", "environment contact needs friction > 0");
      if (!(c.cop_min.x() < 0.0 && c.cop_min.y() < 0.0 && c.cop_max.x() > 0.0 &&
            c.cop_max.y() > 0.0)) {
        add("E_CONTACT_COP", "CoP rectangle must contain the frame origin");
      }
      if (!(c.torsion_coeff > 0.0)) add("E_CONTACT_TORSION", "torsion coefficient must be > 0");
    }
  }
  return diags;
}

ResolvedComposite resolve_composite(const CompositeSystem& system,
                                    const HardwareParams& robot_params) {
  ResolvedComposite out{resolve(system.human), resolve(system.robot, robot_params),
                        resolve(system.load), system.contacts, system.gravity};
  return out;
}

Eigen::MatrixXd coupling_matrix(const ResolvedComposite& system, const SystemState& human_state,
                                const SystemState& robot_state, const SystemState& load_state) {
  const CompositeLayout layout = system.layout();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(layout.wrench_size(), layout.velocity_size());

  const KinematicsCache human_cache = compute_kinematics(system.human, human_state);
  const KinematicsCache robot_cache = compute_kinematics(system.robot, robot_state);
  const KinematicsCache load_cache = compute_kinematics(system.load, load_state);

  for (int c = 0; c < layout.num_contacts; ++c) {
    const ContactSpec& contact = system.contacts[c];
    const bool is_human = contact.owner == AgentRole::kHuman;
    const ResolvedModel& owner = is_human ? system.human : system.robot;
    const KinematicsCache& cache = is_human ? human_cache : robot_cache;
    const int col = is_human ? layout.human_offset() : layout.robot_offset();
    const int rows = 6 * c;

    const Eigen::MatrixXd j_owner = frame_jacobian(owner, cache, owner.frame_index(contact.frame));
    q.block(rows, col, 6, j_owner.cols()) = j_owner;
    if (contact.kind == ContactKind::kGrasp) {
      const Eigen::MatrixXd j_load =
          frame_jacobian(system.load, load_cache, system.load.frame_index(contact.paired_load_frame));
      q.block(rows, layout.load_offset(), 6, 6) = -j_load;
    }
  }
  return q;
}

Eigen::VectorXd composite_gravity_bias(const ResolvedComposite& system,
                                       const SystemState& human_state,
                                       const SystemState& robot_state,
                                       const SystemState& load_state) {
  const CompositeLayout layout = system.layout();
  Eigen::VectorXd h(layout.velocity_size());
  SystemState rest1 = human_state, rest2 = robot_state, rest3 = load_state;
  rest1.velocity.setZero();
  rest2.velocity.setZero();
  rest3.velocity.setZero();
  h.segment(layout.human_offset(), 6 + layout.n1) = bias_forces(system.human, rest1, system.gravity);
  h.segment(layout.robot_offset(), 6 + layout.n2) = bias_forces(system.robot, rest2, system.gravity);
  h.segment(layout.load_offset(), 6) = bias_forces(system.load, rest3, system.gravity);
  return h;
}

Eigen::VectorXd composite_applied_torques(const ResolvedComposite& system,
                                          const Eigen::VectorXd& tau_bar) {
  const CompositeLayout layout = system.layout();
  if (tau_bar.size() != layout.torque_size()) {
    throw ContractError("tau_bar must stack robot motor torques then human joint torques");
  }
  const MotorReflection refl = motor_reflected_terms(system.robot);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(layout.velocity_size());
  b.segment(layout.robot_offset() + 6, layout.n2) =
      refl.input_scale.cwiseProduct(tau_bar.head(layout.n2));
  b.segment(layout.human_offset() + 6, layout.n1) = tau_bar.tail(layout.n1);
  return b;
}

Eigen::VectorXd composite_static_residual(const ResolvedComposite& system,
                                          const SystemState& human_state,
                                          const SystemState& robot_state,
                                          const SystemState& load_state,
                                          const Eigen::VectorXd& tau_bar,
                                          const Eigen::VectorXd& wrenches) {
  const CompositeLayout layout = system.layout();
  if (wrenches.size() != layout.wrench_size()) {
    throw ContractError("wrench stack must hold 6 entries per contact");
  }
  Eigen::VectorXd r = composite_gravity_bias(system, human_state, robot_state, load_state);
  r -= composite_applied_torques(system, tau_bar);
  const Eigen::MatrixXd q = coupling_matrix(system, human_state, robot_state, load_state);
  r.noalias() -= q.transpose() * wrenches;
  return r;
}

}  // namespace colift
