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

#ifndef COLIFT_STATE_HPP_
#define COLIFT_STATE_HPP_

#include <Eigen/Core>

#include "colift/errors.hpp"
#include "colift/math_utils.hpp"

namespace colift {

/// Configuration, velocity and acceleration of one floating-base system.
/// The base pose is (position, scalar-first quaternion); velocities stack the
/// mixed base twist (dp/dt, world angular velocity) over the joint rates.
struct SystemState {
  Eigen::Vector3d base_position = Eigen::Vector3d::Zero();
  Eigen::Vector4d base_quaternion = Eigen::Vector4d(1, 0, 0, 0);
  Eigen::VectorXd joint_positions;
  Eigen::VectorXd velocity;      // size 6 + n
  Eigen::VectorXd acceleration;  // size 6 + n

  static SystemState zero(int num_joints) {
    SystemState s;
    s.joint_positions = Eigen::VectorXd::Zero(num_joints);
    s.velocity = Eigen::VectorXd::Zero(6 + num_joints);
    s.acceleration = Eigen::VectorXd::Zero(6 + num_joints);
    return s;
  }

  int num_joints() const { return static_cast<int>(joint_positions.size()); }

  void check_dims(int num_joints_expected) const {
    if (joint_positions.size() != num_joints_expected ||
        velocity.size() != 6 + num_joints_expected ||
        acceleration.size() != 6 + num_joints_expected) {
      throw ContractError("SystemState dimensions do not match the model");
    }
  }
};

}  // namespace colift

#endif  // COLIFT_STATE_HPP_
