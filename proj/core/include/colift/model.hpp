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

#ifndef COLIFT_MODEL_HPP_
#define COLIFT_MODEL_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/errors.hpp"
#include "colift/math_utils.hpp"
#include "colift/shapes.hpp"

namespace colift {

struct LinkSpec {
  std::string name;
  ShapePrimitive shape;
  double density = 1000.0;          // kg/m^3, constant over the volume
  double length_multiplier = 1.0;   // nominal l_m
};

enum class JointKind { kRevolute, kPrismatic };

struct JointSpec {
  std::string name;
  JointKind kind = JointKind::kRevolute;
  std::string parent_link;
  std::string child_link;
  Eigen::Vector3d origin_xyz = Eigen::Vector3d::Zero();  // joint frame in parent link frame
  Eigen::Vector3d origin_rpy = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();       // motion axis, joint frame
  double pos_min = -1e9;
  double pos_max = 1e9;
  // Direct-drive torque bounds (e.g. human strength); motorized joints take
  // theirs from the bound catalog motor instead.
  double torque_min = -1e18;
  double torque_max = 1e18;
};

struct MotorSpec {
  std::string id;
  double inv_gear_ratio = 1.0;    // 1/Gamma_i, >= 1
  double rotor_inertia = 0.0;     // I_m [kg m^2]
  double torque_min = -1e9;       // joint-side limit after the transmission [N m]
  double torque_max = 1e9;
  double viscous_friction = 0.0;  // K_v [N m s/rad]
};

struct FrameSpec {
  std::string name;
  std::string link;
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  Eigen::Vector3d rpy = Eigen::Vector3d::Zero();
};

/// One row of the joint symmetry map: s[a] - sign * s[b] = 0.
struct SymmetryPair {
  std::string joint_a;
  std::string joint_b;
  int sign = 1;  // +1 mirrored-equal, -1 mirrored-opposite
};

/// Named groups of links/joints that share one hardware gene each.
struct ParameterGroups {
  std::vector<std::vector<std::string>> lengths;    // link names per l_m gene
  std::vector<std::vector<std::string>> densities;  // link names per rho gene
  std::vector<std::vector<std::string>> motors;     // joint names per motor gene
};

enum class ActuationKind {
  kMotor,   // robot: every joint driven through a catalog motor
  kDirect,  // human: joint torques applied directly
};

/// Hardware parameter vector pi: one length multiplier and density per link
/// group and one catalog motor id per joint group.
struct HardwareParams {
  Eigen::VectorXd length_multipliers;
  Eigen::VectorXd densities;
  std::vector<std::string> motor_ids;
};

/// Tree-structured multibody description, the unit the model files encode.
class KinematicModel {
 public:
  std::string name;
  std::string base_link;
  std::vector<LinkSpec> links;
  std::vector<JointSpec> joints;
  std::vector<FrameSpec> frames;
  ActuationKind actuation = ActuationKind::kDirect;
  std::vector<MotorSpec> motor_catalog;
  std::map<std::string, std::string> motor_bindings;  // joint name -> catalog id
  ParameterGroups groups;
  std::vector<SymmetryPair> symmetry;

  int num_joints() const { return static_cast<int>(joints.size()); }
  int num_links() const { return static_cast<int>(links.size()); }

  /// Index lookups; throw ModelError when the name is unknown.
  int link_index(const std::string& link_name) const;
  int joint_index(const std::string& joint_name) const;
  int frame_index(const std::string& frame_name) const;
  int motor_index(const std::string& motor_id) const;
  bool has_frame(const std::string& frame_name) const;

  /// Parameters that reproduce this model unchanged.
  HardwareParams nominal_params() const;

  /// Symmetry map A (entries in {-1,0,+1}) with A s = 0 the symmetry
  /// constraint; one row per symmetry pair.
  Eigen::MatrixXd symmetry_matrix() const;

  /// Structural checks; empty list means the model is usable.
  DiagnosticList validate() const;
};

}  // namespace colift

#endif  // COLIFT_MODEL_HPP_
