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

#include "colift/kinematics.hpp"

#include "colift/errors.hpp"

namespace colift {

KinematicsCache compute_kinematics(const ResolvedModel& model, const SystemState& state) {
  state.check_dims(model.num_joints());

  KinematicsCache cache;
  cache.link_pose.resize(model.num_links());
  cache.joint_axis_world.resize(model.num_joints());
  cache.joint_origin_world.resize(model.num_joints());

  cache.link_pose[model.base_link()] =
      Pose(quaternion_to_rotation(state.base_quaternion), state.base_position);

  for (int link : model.link_order()) {
    if (link == model.base_link()) continue;
    const int j = model.link(link).parent_joint;
    const auto& joint = model.joint(j);
    const Pose x_world_joint = cache.link_pose[joint.parent_link] * joint.origin;
    cache.joint_axis_world[j] = x_world_joint.rotation * joint.axis;
    cache.joint_origin_world[j] = x_world_joint.position;

    const double s = state.joint_positions(j);
    Pose motion;
    if (joint.kind == JointKind::kRevolute) {
      motion.rotation = so3_exp(joint.axis * s);
    } else {
      motion.position = joint.axis * s;
    }
    cache.link_pose[link] = x_world_joint * motion;
  }
  return cache;
}

Pose frame_pose(const ResolvedModel& model, const KinematicsCache& cache, int frame) {
  const auto& f = model.frame(frame);
  return cache.link_pose[f.link] * f.local;
}

Pose forward_kinematics(const ResolvedModel& model, const SystemState& state,
                        const std::string& frame) {
  const KinematicsCache cache = compute_kinematics(model, state);
  return frame_pose(model, cache, model.frame_index(frame));
}

Eigen::MatrixXd point_jacobian(const ResolvedModel& model, const KinematicsCache& cache, int link,
                               const Eigen::Vector3d& point_world) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(6, model.velocity_size());

  // Base columns: the point rides the base rigid body unless a joint between
  // base and link says otherwise; either way these columns describe base
  // motion carrying the whole subtree.
  const Eigen::Vector3d base_pos = cache.link_pose[model.base_link()].position;
  j.block<3, 3>(0, 0).setIdentity();
  j.block<3, 3>(0, 3) = -skew(point_world - base_pos);
  j.block<3, 3>(3, 3).setIdentity();

  // Joint columns along the support path from the link up to the base.
  int cur = link;
  while (cur != model.base_link()) {
    const int jnt = model.link(cur).parent_joint;
    const auto& joint = model.joint(jnt);
    const Eigen::Vector3d& axis = cache.joint_axis_world[jnt];
    if (joint.kind == JointKind::kRevolute) {
      j.block<3, 1>(0, 6 + jnt) = axis.cross(point_world - cache.joint_origin_world[jnt]);
      j.block<3, 1>(3, 6 + jnt) = axis;
    } else {
      j.block<3, 1>(0, 6 + jnt) = axis;
    }
    cur = joint.parent_link;
  }
  return j;
}

Eigen::MatrixXd frame_jacobian(const ResolvedModel& model, const KinematicsCache& cache,
                               int frame) {
  const auto& f = model.frame(frame);
  return point_jacobian(model, cache, f.link, frame_pose(model, cache, frame).position);
}

Eigen::MatrixXd frame_jacobian(const ResolvedModel& model, const SystemState& state,
                               const std::string& frame) {
  const KinematicsCache cache = compute_kinematics(model, state);
  return frame_jacobian(model, cache, model.frame_index(frame));
}

}  // namespace colift
