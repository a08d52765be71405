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

#include "colift/dynamics.hpp"

#include "colift/errors.hpp"

namespace colift {

Eigen::MatrixXd mass_matrix(const ResolvedModel& model, const SystemState& state) {
  const KinematicsCache cache = compute_kinematics(model, state);
  const int nv = model.velocity_size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nv, nv);

  // Gram composition over bodies: every link contributes m J_c^T J_c at its
  // center of mass plus J_w^T (R I R^T) J_w; symmetry and positive
  // semidefiniteness hold by construction.
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& body = model.link(i).body;
    if (body.mass <= 0.0) continue;
    const Pose& pose = cache.link_pose[i];
    const Eigen::Vector3d com_world = pose * body.com;
    const Eigen::MatrixXd j = point_jacobian(model, cache, i, com_world);
    const auto jv = j.topRows<3>();
    const auto jw = j.bottomRows<3>();
    const Eigen::Matrix3d inertia_world =
        pose.rotation * body.inertia * pose.rotation.transpose();
    m.noalias() += body.mass * jv.transpose() * jv;
    m.noalias() += jw.transpose() * inertia_world * jw;
  }
  return m;
}

namespace {

// Per-link spatial state used by the bias recursion: world angular velocity,
// linear velocity of the link-frame origin, and their rates at nudot = 0.
struct LinkMotion {
  Eigen::Vector3d omega, v_origin, domega, a_origin;
};

}  // namespace

Eigen::VectorXd bias_forces(const ResolvedModel& model, const SystemState& state,
                            const Eigen::Vector3d& gravity) {
  const KinematicsCache cache = compute_kinematics(model, state);
  const int nv = model.velocity_size();

  // Velocity and bias-acceleration propagation (nudot = 0) in world frame.
  std::vector<LinkMotion> motion(model.num_links());
  {
    auto& base = motion[model.base_link()];
    base.v_origin = state.velocity.segment<3>(0);
    base.omega = state.velocity.segment<3>(3);
    base.domega.setZero();
    base.a_origin.setZero();
  }
  for (int link : model.link_order()) {
    if (link == model.base_link()) continue;
    const int j = model.link(link).parent_joint;
    const auto& joint = model.joint(j);
    const LinkMotion& parent = motion[model.link(link).parent_link];
    LinkMotion& self = motion[link];
    const Eigen::Vector3d& axis = cache.joint_axis_world[j];
    const Eigen::Vector3d origin = cache.link_pose[link].position;
    const Eigen::Vector3d radius = origin - cache.link_pose[model.link(link).parent_link].position;
    const double sdot = state.velocity(6 + j);

    const Eigen::Vector3d v_carried = parent.v_origin + parent.omega.cross(radius);
    const Eigen::Vector3d a_carried =
        parent.a_origin + parent.domega.cross(radius) + parent.omega.cross(parent.omega.cross(radius));
    if (joint.kind == JointKind::kRevolute) {
      self.omega = parent.omega + axis * sdot;
      self.v_origin = v_carried;
      // The axis is fixed in the parent, so its world rate is omega_p x axis.
      self.domega = parent.domega + parent.omega.cross(axis) * sdot;
      self.a_origin = a_carried;
    } else {
      self.omega = parent.omega;
      self.v_origin = v_carried + axis * sdot;
      self.domega = parent.domega;
      self.a_origin = a_carried + 2.0 * parent.omega.cross(axis * sdot);
    }
  }

  // d'Alembert: h = sum_i J_ci^T m_i (a_ci - g) + J_wi^T (I domega + w x I w).
  Eigen::VectorXd h = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& body = model.link(i).body;
    if (body.mass <= 0.0) continue;
    const Pose& pose = cache.link_pose[i];
    const LinkMotion& m = motion[i];
    const Eigen::Vector3d arm = pose.rotation * body.com;
    const Eigen::Vector3d com_world = pose.position + arm;
    const Eigen::Vector3d a_com =
        m.a_origin + m.domega.cross(arm) + m.omega.cross(m.omega.cross(arm));
    const Eigen::Matrix3d inertia_world =
        pose.rotation * body.inertia * pose.rotation.transpose();

    const Eigen::Vector3d force = body.mass * (a_com - gravity);
    const Eigen::Vector3d torque =
        inertia_world * m.domega + m.omega.cross(inertia_world * m.omega);

    const Eigen::MatrixXd j = point_jacobian(model, cache, i, com_world);
    h.noalias() += j.topRows<3>().transpose() * force;
    h.noalias() += j.bottomRows<3>().transpose() * torque;
  }
  return h;
}

MotorReflection motor_reflected_terms(const ResolvedModel& model) {
  const int n = model.num_joints();
  MotorReflection out;
  out.reflected_inertia = Eigen::VectorXd::Zero(n);
  out.reflected_viscous = Eigen::VectorXd::Zero(n);
  out.input_scale = Eigen::VectorXd::Ones(n);
  if (model.actuation() == ActuationKind::kDirect) return out;
  for (int j = 0; j < n; ++j) {
    const auto& joint = model.joint(j);
    if (!joint.has_motor) {
      throw ModelError("actuated joint " + joint.name + " has no motor binding");
    }
    out.reflected_inertia(j) = joint.inv_gear_ratio * joint.inv_gear_ratio * joint.rotor_inertia;
    out.reflected_viscous(j) = joint.inv_gear_ratio * joint.inv_gear_ratio * joint.viscous_friction;
    out.input_scale(j) = joint.inv_gear_ratio;
  }
  return out;
}

Eigen::MatrixXd augmented_mass_matrix(const ResolvedModel& model, const SystemState& state) {
  Eigen::MatrixXd m = mass_matrix(model, state);
  const MotorReflection refl = motor_reflected_terms(model);
  m.bottomRightCorner(model.num_joints(), model.num_joints()).diagonal() += refl.reflected_inertia;
  return m;
}

Eigen::VectorXd full_dynamics_residual(const ResolvedModel& model, const SystemState& state,
                                       const Eigen::VectorXd& tau,
                                       const std::vector<ContactWrench>& wrenches,
                                       const Eigen::Vector3d& gravity) {
  state.check_dims(model.num_joints());
  if (tau.size() != model.num_joints()) {
    throw ContractError("torque vector size does not match the joint count");
  }

  const MotorReflection refl = motor_reflected_terms(model);
  Eigen::VectorXd r = augmented_mass_matrix(model, state) * state.acceleration;
  r += bias_forces(model, state, gravity);
  r.tail(model.num_joints()) -= refl.input_scale.cwiseProduct(tau);
  r.tail(model.num_joints()) +=
      refl.reflected_viscous.cwiseProduct(state.velocity.tail(model.num_joints()));

  const KinematicsCache cache = compute_kinematics(model, state);
  for (const auto& contact : wrenches) {
    const Eigen::MatrixXd j = frame_jacobian(model, cache, model.frame_index(contact.frame));
    r.noalias() -= j.transpose() * contact.wrench;
  }
  return r;
}

}  // namespace colift
