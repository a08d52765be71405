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

#ifndef COLIFT_RESOLVED_MODEL_HPP_
#define COLIFT_RESOLVED_MODEL_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/model.hpp"

namespace colift {

/// A KinematicModel with one concrete HardwareParams applied: link inertias
/// computed from scaled shapes, child-joint and frame offsets stretched along
/// each link's growth axis, motors bound per joint. This is the object the
/// kinematics and dynamics routines operate on; resolving once per design
/// keeps the hot paths free of repeated lookups.
class ResolvedModel {
 public:
  struct Link {
    std::string name;
    BodyInertia body;    // scaled mass properties, link frame
    int parent_joint;    // -1 for the base link
    int parent_link;     // -1 for the base link
  };

  struct Joint {
    std::string name;
    JointKind kind;
    int parent_link;
    int child_link;
    Pose origin;               // scaled X_parent_joint
    Eigen::Vector3d axis;      // unit, joint frame
    double pos_min, pos_max;
    // Motor data (identity transmission when the model is direct-driven).
    double inv_gear_ratio = 1.0;
    double rotor_inertia = 0.0;
    double joint_torque_min = -1e18;  // joint-side limits
    double joint_torque_max = 1e18;
    double viscous_friction = 0.0;
    bool has_motor = false;
  };

  struct Frame {
    std::string name;
    int link;
    Pose local;  // scaled placement in the link frame
  };

  const std::string& name() const { return name_; }
  int num_joints() const { return static_cast<int>(joints_.size()); }
  int num_links() const { return static_cast<int>(links_.size()); }
  int num_frames() const { return static_cast<int>(frames_.size()); }
  int velocity_size() const { return 6 + num_joints(); }
  int base_link() const { return base_link_; }
  ActuationKind actuation() const { return actuation_; }

  const Link& link(int i) const { return links_[i]; }
  const Joint& joint(int i) const { return joints_[i]; }
  const Frame& frame(int i) const { return frames_[i]; }
  /// Links ordered parents-before-children for forward propagation.
  const std::vector<int>& link_order() const { return link_order_; }

  int frame_index(const std::string& frame_name) const;
  int joint_index(const std::string& joint_name) const;
  bool has_frame(const std::string& frame_name) const;

  double total_mass() const;
  Eigen::VectorXd joint_lower_limits() const;
  Eigen::VectorXd joint_upper_limits() const;
  Eigen::MatrixXd symmetry_matrix() const { return symmetry_; }

  friend ResolvedModel resolve(const KinematicModel& model, const HardwareParams& params);

 private:
  std::string name_;
  int base_link_ = 0;
  ActuationKind actuation_ = ActuationKind::kDirect;
  std::vector<Link> links_;
  std::vector<Joint> joints_;
  std::vector<Frame> frames_;
  std::vector<int> link_order_;
  Eigen::MatrixXd symmetry_;
};

/// Applies pi to the model. Dimension or id mismatches throw ModelError.
ResolvedModel resolve(const KinematicModel& model, const HardwareParams& params);

/// Convenience overload using the model's nominal parameters.
ResolvedModel resolve(const KinematicModel& model);

}  // namespace colift

#endif  // COLIFT_RESOLVED_MODEL_HPP_
