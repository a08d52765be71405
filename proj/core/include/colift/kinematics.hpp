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

#ifndef COLIFT_KINEMATICS_HPP_
#define COLIFT_KINEMATICS_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/math_utils.hpp"
#include "colift/resolved_model.hpp"
#include "colift/state.hpp"

namespace colift {

/// World placement of every link and joint at one configuration. Velocities
/// use the mixed convention: linear part is the time derivative of the world
/// position, angular part is the world angular velocity.
struct KinematicsCache {
  std::vector<Pose> link_pose;                    // world pose per link
  std::vector<Eigen::Vector3d> joint_axis_world;  // unit motion axis per joint
  std::vector<Eigen::Vector3d> joint_origin_world;
};

KinematicsCache compute_kinematics(const ResolvedModel& model, const SystemState& state);

/// World pose of a named frame.
Pose forward_kinematics(const ResolvedModel& model, const SystemState& state,
                        const std::string& frame);
Pose frame_pose(const ResolvedModel& model, const KinematicsCache& cache, int frame);

/// 6 x (6+n) Jacobian of the world point `point_world` rigidly attached to
/// `link`: rows 0-2 map the system velocity to the point's linear velocity,
/// rows 3-5 to the link's angular velocity.
Eigen::MatrixXd point_jacobian(const ResolvedModel& model, const KinematicsCache& cache, int link,
                               const Eigen::Vector3d& point_world);

/// Frame Jacobian: J * velocity = (frame linear velocity, link angular
/// velocity); block structure [J_base | J_joints].
Eigen::MatrixXd frame_jacobian(const ResolvedModel& model, const SystemState& state,
                               const std::string& frame);
Eigen::MatrixXd frame_jacobian(const ResolvedModel& model, const KinematicsCache& cache, int frame);

}  // namespace colift

#endif  // COLIFT_KINEMATICS_HPP_
