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

#include <cmath>

#include <doctest.h>
#include <Eigen/Dense>

#include "colift/kinematics.hpp"
#include "colift/math_utils.hpp"
#include "colift/model_io.hpp"
#include "colift/resolved_model.hpp"
#include "colift/rng.hpp"
#include "test_helpers.hpp"

using namespace colift;
using colift::testing::perturb_state;
using colift::testing::preset_path;
using colift::testing::random_state;
using colift::testing::two_link_model;

namespace {

// Finite-difference frame Jacobian in mixed coordinates: world-frame linear
// velocity of the frame origin over world-frame angular velocity.
Eigen::MatrixXd fd_frame_jacobian(const ResolvedModel& model, const SystemState& state,
                                  const std::string& frame, double eps = 1e-6) {
  const int nv = model.velocity_size();
  Eigen::MatrixXd jac(6, nv);
  for (int i = 0; i < nv; ++i) {
    Pose plus = forward_kinematics(model, perturb_state(state, i, eps), frame);
    Pose minus = forward_kinematics(model, perturb_state(state, i, -eps), frame);
    jac.block<3, 1>(0, i) = (plus.position - minus.position) / (2 * eps);
    jac.block<3, 1>(3, i) = so3_log(plus.rotation * minus.rotation.transpose()) / (2 * eps);
  }
  return jac;
}

}  // namespace

TEST_CASE("two-link forward kinematics matches the planar closed form") {
  KinematicModel m = two_link_model();
  ResolvedModel r = resolve(m);
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    SystemState s = SystemState::zero(2);
    double q1 = rng.uniform(-2, 2), q2 = rng.uniform(-2, 2);
    s.joint_positions << q1, q2;
    Pose tip = forward_kinematics(r, s, "tip");
    // +y rotations swing the -z chain toward -x
    Eigen::Vector3d expect(-0.5 * std::sin(q1) - 0.4 * std::sin(q1 + q2), 0.0,
                           -0.5 * std::cos(q1) - 0.4 * std::cos(q1 + q2));
    CHECK((tip.position - expect).norm() == doctest::Approx(0).epsilon(1e-12));
  }
}

TEST_CASE("base pose moves every frame rigidly") {
  ResolvedModel r = resolve(load_model(preset_path("toy_robot.json")));
  Rng rng(22);
  for (int t = 0; t < 20; ++t) {
    SystemState local = random_state(r.num_joints(), rng);
    SystemState at_origin = local;
    at_origin.base_position.setZero();
    at_origin.base_quaternion = quaternion_identity();
    Pose base(quaternion_to_rotation(local.base_quaternion), local.base_position);
    for (int f = 0; f < r.num_frames(); ++f) {
      Pose world = forward_kinematics(r, local, r.frame(f).name);
      Pose body = forward_kinematics(r, at_origin, r.frame(f).name);
      Pose composed = base * body;
      CHECK((world.position - composed.position).norm() == doctest::Approx(0).epsilon(1e-12));
      CHECK((world.rotation - composed.rotation).norm() == doctest::Approx(0).epsilon(1e-12));
    }
  }
}

TEST_CASE("frame distances are invariant under base motion") {
  ResolvedModel r = resolve(load_model(preset_path("toy_human_a.json")));
  Rng rng(23);
  int lh = r.frame_index("left_hand");
  int rh = r.frame_index("right_hand");
  SystemState zero = SystemState::zero(r.num_joints());
  KinematicsCache cache = compute_kinematics(r, zero);
  // hands sit on different arms; compare against the zero posture where the
  // arms mirror each other
  double ref = (frame_pose(r, cache, lh).position - frame_pose(r, cache, rh).position).norm();
  for (int t = 0; t < 10; ++t) {
    SystemState s = random_state(r.num_joints(), rng);
    s.joint_positions.setZero();  // keep the mirrored posture, move the base
    KinematicsCache c = compute_kinematics(r, s);
    double d = (frame_pose(r, c, lh).position - frame_pose(r, c, rh).position).norm();
    CHECK(d == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("frame jacobians match finite differences on the toy models") {
  Rng rng(24);
  for (const char* name : {"toy_robot.json", "toy_human_a.json"}) {
    ResolvedModel r = resolve(load_model(preset_path(name)));
    for (int t = 0; t < 25; ++t) {
      SystemState s = random_state(r.num_joints(), rng);
      for (int f = 0; f < r.num_frames(); ++f) {
        Eigen::MatrixXd jac = frame_jacobian(r, s, r.frame(f).name);
        Eigen::MatrixXd fd = fd_frame_jacobian(r, s, r.frame(f).name);
        CHECK((jac - fd).cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("point jacobian agrees with the frame jacobian translation rows") {
  ResolvedModel r = resolve(load_model(preset_path("toy_robot.json")));
  Rng rng(25);
  for (int t = 0; t < 20; ++t) {
    SystemState s = random_state(r.num_joints(), rng);
    KinematicsCache cache = compute_kinematics(r, s);
    for (int f = 0; f < r.num_frames(); ++f) {
      Pose pose = frame_pose(r, cache, f);
      Eigen::MatrixXd jp = point_jacobian(r, cache, r.frame(f).link, pose.position);
      Eigen::MatrixXd jf = frame_jacobian(r, cache, f);
      CHECK((jp - jf.topRows(3)).cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-12));
    }
  }
}

TEST_CASE("base point jacobian has the rigid-body structure") {
  ResolvedModel r = resolve(load_model(preset_path("toy_robot.json")));
  Rng rng(26);
  SystemState s = random_state(r.num_joints(), rng);
  KinematicsCache cache = compute_kinematics(r, s);
  Eigen::Vector3d p = s.base_position + Eigen::Vector3d(0.3, -0.2, 0.5);
  Eigen::MatrixXd jac = point_jacobian(r, cache, r.base_link(), p);
  CHECK((jac.leftCols(3) - Eigen::Matrix3d::Identity()).norm() ==
        doctest::Approx(0).epsilon(1e-12));
  CHECK((jac.middleCols(3, 3) + skew(p - s.base_position)).norm() ==
        doctest::Approx(0).epsilon(1e-12));
  CHECK(jac.rightCols(r.num_joints()).norm() == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("unknown frame names throw") {
  ResolvedModel r = resolve(load_model(preset_path("toy_robot.json")));
  SystemState s = SystemState::zero(r.num_joints());
  CHECK_THROWS(forward_kinematics(r, s, "nope"));
  CHECK_THROWS(frame_jacobian(r, s, "nope"));
}
