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

#ifndef COLIFT_MATH_UTILS_HPP_
#define COLIFT_MATH_UTILS_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace colift {

// Quaternions are stored scalar-first (w, x, y, z) throughout.

/// Skew-symmetric operator: skew(v) * u == v x u.
Eigen::Matrix3d skew(const Eigen::Vector3d& v);

/// Inverse of skew() for (near-)skew-symmetric matrices.
Eigen::Vector3d unskew(const Eigen::Matrix3d& m);

/// Rodrigues rotation from a quaternion. The input is normalized first;
/// a zero quaternion is rejected as degenerate.
Eigen::Matrix3d quaternion_to_rotation(const Eigen::Vector4d& q_wxyz);

/// Scalar-first quaternion from a rotation matrix (w >= 0 branch).
Eigen::Vector4d rotation_to_quaternion(const Eigen::Matrix3d& r);

Eigen::Vector4d quaternion_normalized(const Eigen::Vector4d& q_wxyz);
Eigen::Vector4d quaternion_multiply(const Eigen::Vector4d& a, const Eigen::Vector4d& b);
Eigen::Vector4d quaternion_conjugate(const Eigen::Vector4d& q);
Eigen::Vector4d quaternion_identity();

/// Geodesic angle between the rotations represented by two unit quaternions,
/// in [0, pi]. Inputs are normalized first.
double quaternion_geodesic_angle(const Eigen::Vector4d& a, const Eigen::Vector4d& b);

/// SO(3) exponential of an axis-angle vector.
Eigen::Matrix3d so3_exp(const Eigen::Vector3d& omega);

/// SO(3) logarithm as an axis-angle vector.
Eigen::Vector3d so3_log(const Eigen::Matrix3d& r);

/// Extrinsic XYZ (roll-pitch-yaw) rotation.
Eigen::Matrix3d rpy_to_rotation(const Eigen::Vector3d& rpy);

/// Rigid transform as (rotation, translation).
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d position = Eigen::Vector3d::Zero();

  Pose() = default;
  Pose(const Eigen::Matrix3d& r, const Eigen::Vector3d& p) : rotation(r), position(p) {}

  Pose operator*(const Pose& other) const {
    return Pose(rotation * other.rotation, position + rotation * other.position);
  }
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return position + rotation * p;
  }
  Pose inverse() const {
    return Pose(rotation.transpose(), -(rotation.transpose() * position));
  }
};

}  // namespace colift

#endif  // COLIFT_MATH_UTILS_HPP_
