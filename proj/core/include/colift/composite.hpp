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

#ifndef COLIFT_COMPOSITE_HPP_
#define COLIFT_COMPOSITE_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/dynamics.hpp"
#include "colift/model.hpp"
#include "colift/resolved_model.hpp"
#include "colift/state.hpp"

namespace colift {

/// Stacking order of the collaboration: human first, then robot, then load.
enum class AgentRole { kHuman, kRobot, kLoad };

enum class ContactKind {
  kEnvironment,  // foot against the ground, unilateral with friction
  kGrasp,        // hand rigidly attached to a load frame, bilateral
};

struct ContactSpec {
  AgentRole owner = AgentRole::kHuman;
  std::string frame;              // frame on the owner
  ContactKind kind = ContactKind::kEnvironment;
  std::string paired_load_frame;  // grasp contacts only
  double friction = 0.8;          // environment contacts only
  Eigen::Vector2d cop_min = Eigen::Vector2d(-0.05, -0.05);  // contact-plane rectangle
  Eigen::Vector2d cop_max = Eigen::Vector2d(0.05, 0.05);
  double torsion_coeff = 0.1;  // |m_z| <= coeff * f_z
  // 6 transmits the full wrench, 3 pins the moment components to zero
  // (spherical grasp). The stacked wrench always keeps 6 slots per contact.
  int wrench_dofs = 6;
};

/// The coupled human-robot-load collaboration before any design is applied.
struct CompositeSystem {
  KinematicModel human;
  KinematicModel robot;
  KinematicModel load;  // single floating body carrying the grasp frames
  std::vector<ContactSpec> contacts;
  Eigen::Vector3d gravity = default_gravity();

  int num_contacts() const { return static_cast<int>(contacts.size()); }
  /// Structural checks (frames resolve, load is one body, grasps are paired).
  DiagnosticList validate() const;
};

/// Column/row bookkeeping of the stacked system. Velocity columns run
/// human (6+n1), robot (6+n2), load (6); wrench rows run 6 per contact in
/// declaration order.
struct CompositeLayout {
  int n1 = 0;  // human joints
  int n2 = 0;  // robot joints
  int num_contacts = 0;

  int human_offset() const { return 0; }
  int robot_offset() const { return 6 + n1; }
  int load_offset() const { return 12 + n1 + n2; }
  int velocity_size() const { return 18 + n1 + n2; }
  int wrench_size() const { return 6 * num_contacts; }
  int torque_size() const { return n1 + n2; }  // robot motor torques then human torques
};

/// One design applied: robot resolved with pi, human and load at nominal.
struct ResolvedComposite {
  ResolvedModel human;
  ResolvedModel robot;
  ResolvedModel load;
  std::vector<ContactSpec> contacts;
  Eigen::Vector3d gravity = default_gravity();

  CompositeLayout layout() const {
    return CompositeLayout{human.num_joints(), robot.num_joints(),
                           static_cast<int>(contacts.size())};
  }
  const ResolvedModel& agent(AgentRole role) const {
    return role == AgentRole::kHuman ? human : role == AgentRole::kRobot ? robot : load;
  }
};

ResolvedComposite resolve_composite(const CompositeSystem& system,
                                    const HardwareParams& robot_params);

/// Contact coupling map Q, 6*n_c x (18+n1+n2): environment rows hold the
/// owner's contact-frame Jacobian; grasp rows hold the owner's Jacobian minus
/// the load's Jacobian of the paired frame, so Q nu = 0 states all contact
/// velocity constraints at once. Q^T maps stacked contact wrenches (expressed
/// as force-on-owner) to generalized forces with the action-reaction sign
/// pattern built in.
Eigen::MatrixXd coupling_matrix(const ResolvedComposite& system, const SystemState& human_state,
                                const SystemState& robot_state, const SystemState& load_state);

/// Stacked gravity bias h(q, 0, pi) of the three subsystems.
Eigen::VectorXd composite_gravity_bias(const ResolvedComposite& system,
                                       const SystemState& human_state,
                                       const SystemState& robot_state,
                                       const SystemState& load_state);

/// Input map Bbar^T stacked: tau_bar = (robot motor torques, human joint
/// torques) enters the robot rows through the transmission scale and the
/// human rows directly.
Eigen::VectorXd composite_applied_torques(const ResolvedComposite& system,
                                          const Eigen::VectorXd& tau_bar);

/// Static equilibrium defect h(q, 0) - Bbar tau_bar - Q^T f for the whole
/// collaboration; zero iff all three subsystems balance simultaneously.
Eigen::VectorXd composite_static_residual(const ResolvedComposite& system,
                                          const SystemState& human_state,
                                          const SystemState& robot_state,
                                          const SystemState& load_state,
                                          const Eigen::VectorXd& tau_bar,
                                          const Eigen::VectorXd& wrenches);

}  // namespace colift

#endif  // COLIFT_COMPOSITE_HPP_
