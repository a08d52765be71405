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

#ifndef COLIFT_TESTS_TEST_HELPERS_HPP_
#define COLIFT_TESTS_TEST_HELPERS_HPP_

#include <string>

#include <Eigen/Core>

#include "colift/math_utils.hpp"
#include "colift/model.hpp"
#include "colift/rng.hpp"
#include "colift/state.hpp"

namespace colift::testing {

inline std::string preset_path(const std::string& file) {
  return std::string(COLIFT_PRESET_DIR) + "/" + file;
}

inline Eigen::Vector4d random_quaternion(Rng& rng) {
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q[i] = rng.uniform(-1.0, 1.0);
  if (q.norm() < 1e-6) q = Eigen::Vector4d(1, 0, 0, 0);
  return quaternion_normalized(q);
}

inline SystemState random_state(int num_joints, Rng& rng, double pos_range = 1.0,
                                double vel_range = 1.0) {
  SystemState s = SystemState::zero(num_joints);
  for (int i = 0; i < 3; ++i) s.base_position[i] = rng.uniform(-pos_range, pos_range);
  s.base_quaternion = random_quaternion(rng);
  for (int i = 0; i < num_joints; ++i) s.joint_positions[i] = rng.uniform(-pos_range, pos_range);
  for (int i = 0; i < 6 + num_joints; ++i) s.velocity[i] = rng.uniform(-vel_range, vel_range);
  return s;
}

// Advances a floating-base configuration by eps along one mixed-velocity
// coordinate: world-frame base translation, world-frame base rotation through
// the exponential map, or a single joint.
inline SystemState perturb_state(const SystemState& s, int coord, double eps) {
  SystemState out = s;
  if (coord < 3) {
    out.base_position[coord] += eps;
  } else if (coord < 6) {
    Eigen::Vector3d omega = Eigen::Vector3d::Zero();
    omega[coord - 3] = eps;
    Eigen::Matrix3d r = so3_exp(omega) * quaternion_to_rotation(s.base_quaternion);
    out.base_quaternion = rotation_to_quaternion(r);
  } else {
    out.joint_positions[coord - 6] += eps;
  }
  return out;
}

// Two-link planar pendulum about +y, hanging along -z, with the exact closed
// form used by the Lagrangian oracle in test_dynamics.
struct TwoLink {
  double l1 = 0.5, l2 = 0.4;      // full link lengths
  double rho1 = 1200, rho2 = 900;  // densities
  double r1 = 0.04, r2 = 0.03;     // cylinder radii
};

inline KinematicModel two_link_model(const TwoLink& p = {}) {
  KinematicModel m;
  m.name = "two_link";
  m.base_link = "base";

  LinkSpec base;
  base.name = "base";
  base.shape.kind = ShapeKind::kBox;
  base.shape.dims = Eigen::Vector3d(0.2, 0.2, 0.2);
  base.density = 1000;
  m.links.push_back(base);

  LinkSpec link1;
  link1.name = "link1";
  link1.shape.kind = ShapeKind::kCylinder;
  link1.shape.dims = Eigen::Vector3d(p.r1, p.l1, 0);
  link1.shape.center_offset = Eigen::Vector3d(0, 0, -p.l1 / 2);
  link1.density = p.rho1;
  m.links.push_back(link1);

  LinkSpec link2;
  link2.name = "link2";
  link2.shape.kind = ShapeKind::kCylinder;
  link2.shape.dims = Eigen::Vector3d(p.r2, p.l2, 0);
  link2.shape.center_offset = Eigen::Vector3d(0, 0, -p.l2 / 2);
  link2.density = p.rho2;
  m.links.push_back(link2);

  JointSpec j1;
  j1.name = "q1";
  j1.parent_link = "base";
  j1.child_link = "link1";
  j1.axis = Eigen::Vector3d::UnitY();
  j1.pos_min = -3.0;
  j1.pos_max = 3.0;
  j1.torque_min = -100;
  j1.torque_max = 100;
  m.joints.push_back(j1);

  JointSpec j2 = j1;
  j2.name = "q2";
  j2.parent_link = "link1";
  j2.child_link = "link2";
  j2.origin_xyz = Eigen::Vector3d(0, 0, -p.l1);
  m.joints.push_back(j2);

  FrameSpec tip;
  tip.name = "tip";
  tip.link = "link2";
  tip.xyz = Eigen::Vector3d(0, 0, -p.l2);
  m.frames.push_back(tip);
  return m;
}

}  // namespace colift::testing

#endif  // COLIFT_TESTS_TEST_HELPERS_HPP_
