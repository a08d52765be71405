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

#include <algorithm>
#include <string>
#include <vector>

#include <doctest.h>

#include "colift/model.hpp"
#include "colift/model_io.hpp"
#include "colift/resolved_model.hpp"
#include "test_helpers.hpp"

using namespace colift;
using colift::testing::preset_path;
using colift::testing::two_link_model;

namespace {

bool has_code(const DiagnosticList& diags, const std::string& code) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_CASE("shipped models validate clean") {
  for (const char* name : {"toy_robot.json", "toy_human_a.json", "toy_human_b.json",
                           "arm_robot.json", "arm_human.json", "icub_like.json",
                           "human_168.json", "human_178.json", "human_182.json"}) {
    KinematicModel m = load_model(preset_path(name));
    DiagnosticList diags = m.validate();
    for (const Diagnostic& d : diags) MESSAGE(name, ": ", d.code, " ", d.message);
    CHECK(diags.empty());
  }
}

TEST_CASE("validator flags broken topology") {
  KinematicModel m = two_link_model();

  SUBCASE("base as child") {
    JointSpec j;
    j.name = "q3";
    j.parent_link = "link2";
    j.child_link = "base";
    m.joints.push_back(j);
    CHECK(has_code(m.validate(), "E_TOPOLOGY_BASE_CHILD"));
  }
  SUBCASE("detached cycle") {
    LinkSpec extra;
    extra.name = "loop_a";
    extra.shape.kind = ShapeKind::kSphere;
    extra.shape.dims = Eigen::Vector3d(0.1, 0, 0);
    m.links.push_back(extra);
    extra.name = "loop_b";
    m.links.push_back(extra);
    JointSpec j;
    j.name = "qa";
    j.parent_link = "loop_a";
    j.child_link = "loop_b";
    m.joints.push_back(j);
    j.name = "qb";
    j.parent_link = "loop_b";
    j.child_link = "loop_a";
    m.joints.push_back(j);
    DiagnosticList diags = m.validate();
    CHECK((has_code(diags, "E_TOPOLOGY_CYCLE") || has_code(diags, "E_TOPOLOGY_MULTI_PARENT") ||
           has_code(diags, "E_TOPOLOGY_DISCONNECTED")));
  }
  SUBCASE("two parents") {
    JointSpec j;
    j.name = "q3";
    j.parent_link = "base";
    j.child_link = "link2";
    m.joints.push_back(j);
    CHECK(has_code(m.validate(), "E_TOPOLOGY_MULTI_PARENT"));
  }
  SUBCASE("disconnected island") {
    LinkSpec l;
    l.name = "orphan";
    l.shape.kind = ShapeKind::kSphere;
    l.shape.dims = Eigen::Vector3d(0.1, 0, 0);
    m.links.push_back(l);
    DiagnosticList diags = m.validate();
    CHECK((has_code(diags, "E_TOPOLOGY_DISCONNECTED") || has_code(diags, "E_LINK_JOINT_COUNT")));
  }
  SUBCASE("unknown base") {
    m.base_link = "nope";
    CHECK(has_code(m.validate(), "E_BASE_LINK_UNKNOWN"));
  }
  SUBCASE("duplicate link name") {
    m.links.push_back(m.links[1]);
    CHECK(has_code(m.validate(), "E_DUPLICATE_LINK"));
  }
  SUBCASE("zero joint axis") {
    m.joints[0].axis = Eigen::Vector3d::Zero();
    CHECK(has_code(m.validate(), "E_JOINT_AXIS_ZERO"));
  }
  SUBCASE("swapped limits") {
    m.joints[0].pos_min = 1.0;
    m.joints[0].pos_max = -1.0;
    CHECK(has_code(m.validate(), "E_LIMITS_ORDER"));
  }
  SUBCASE("frame on unknown link") {
    m.frames.push_back({"f", "nope", Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()});
    CHECK(has_code(m.validate(), "E_FRAME_UNKNOWN_LINK"));
  }
}

TEST_CASE("validator flags actuation problems") {
  KinematicModel m = load_model(preset_path("toy_robot.json"));
  REQUIRE(m.actuation == ActuationKind::kMotor);

  SUBCASE("binding to unknown motor") {
    m.motor_bindings["hip_pitch"] = "missing";
    CHECK(has_code(m.validate(), "E_MOTOR_UNKNOWN_ID"));
  }
  SUBCASE("joint without binding") {
    m.motor_bindings.erase("hip_pitch");
    CHECK(has_code(m.validate(), "E_MOTOR_BINDING_MISSING"));
  }
  SUBCASE("bad gear ratio") {
    m.motor_catalog[0].inv_gear_ratio = 0.0;
    CHECK(has_code(m.validate(), "E_MOTOR_GEAR"));
  }
  SUBCASE("group with unknown member") {
    m.groups.motors.push_back({"nope"});
    CHECK(has_code(m.validate(), "E_GROUP_UNKNOWN_MEMBER"));
  }
  SUBCASE("overlapping groups") {
    m.groups.lengths.push_back({"leg"});
    CHECK(has_code(m.validate(), "E_GROUP_OVERLAP"));
  }
  SUBCASE("symmetry over unknown joint") {
    m.symmetry.push_back({"hip_pitch", "nope", 1});
    CHECK(has_code(m.validate(), "E_SYMMETRY_UNKNOWN_JOINT"));
  }
}

TEST_CASE("nominal params read back the model values") {
  KinematicModel m = load_model(preset_path("toy_robot.json"));
  HardwareParams p = m.nominal_params();
  REQUIRE(p.length_multipliers.size() == 3);
  REQUIRE(p.densities.size() == 3);
  REQUIRE(p.motor_ids.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(p.length_multipliers[i] == 1.0);
  CHECK(p.densities[0] == m.links[m.link_index("leg")].density);
  CHECK(p.densities[1] == m.links[m.link_index("torso")].density);
  CHECK(p.motor_ids[0] == m.motor_bindings.at("hip_pitch"));
}

TEST_CASE("apply_params then nominal_params is the identity") {
  KinematicModel m = load_model(preset_path("toy_robot.json"));
  HardwareParams p = m.nominal_params();
  p.length_multipliers << 1.1, 0.9, 1.25;
  p.densities << 500, 2000, 900;
  p.motor_ids = {"d20", "d05", "d10"};
  KinematicModel changed = apply_params(m, p);
  HardwareParams back = changed.nominal_params();
  CHECK((back.length_multipliers - p.length_multipliers).norm() == 0.0);
  CHECK((back.densities - p.densities).norm() == 0.0);
  CHECK(back.motor_ids == p.motor_ids);
  // grouped links move together
  CHECK(changed.links[changed.link_index("left_arm")].length_multiplier == 1.25);
  CHECK(changed.links[changed.link_index("right_arm")].length_multiplier == 1.25);
  CHECK(changed.motor_bindings.at("left_shoulder_pitch") == "d10");
  CHECK(changed.motor_bindings.at("right_shoulder_pitch") == "d10");
}

TEST_CASE("model json round-trip preserves everything observable") {
  for (const char* name : {"toy_robot.json", "icub_like.json", "toy_human_a.json"}) {
    KinematicModel m = load_model(preset_path(name));
    KinematicModel again = model_from_json_text(model_to_json_text(m), name);
    CHECK(model_to_json_text(again) == model_to_json_text(m));
    CHECK(again.num_joints() == m.num_joints());
    CHECK(again.num_links() == m.num_links());
    CHECK(again.validate().empty());
  }
}

TEST_CASE("model io rejects malformed input") {
  CHECK_THROWS_AS(model_from_json_text("{", "bad"), IoError);
  CHECK_THROWS_AS(model_from_json_text("[]", "bad"), IoError);
  CHECK_THROWS_AS(model_from_json_text("{\"schema\": \"colift_model\"}", "bad"), IoError);
  CHECK_THROWS_AS(load_model("/nonexistent/nope.json"), IoError);
}

TEST_CASE("symmetry matrix encodes signed pairing") {
  KinematicModel m = load_model(preset_path("toy_robot.json"));
  Eigen::MatrixXd a = m.symmetry_matrix();
  REQUIRE(a.rows() == 1);
  REQUIRE(a.cols() == 4);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(4);
  q[m.joint_index("left_shoulder_pitch")] = 0.7;
  q[m.joint_index("right_shoulder_pitch")] = 0.7;
  CHECK((a * q).norm() == doctest::Approx(0).epsilon(1e-14));
  q[m.joint_index("right_shoulder_pitch")] = -0.7;
  CHECK((a * q).norm() == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("resolved model scales geometry with length multipliers") {
  KinematicModel m = load_model(preset_path("toy_robot.json"));
  HardwareParams p = m.nominal_params();
  ResolvedModel nominal = resolve(m, p);
  p.length_multipliers[0] = 1.5;  // leg group
  ResolvedModel longer = resolve(m, p);
  // A longer leg moves the foot frame down and adds mass.
  int foot = nominal.frame_index("foot");
  CHECK(longer.frame(foot).local.position.z() ==
        doctest::Approx(1.5 * nominal.frame(foot).local.position.z()).epsilon(1e-12));
  CHECK(longer.total_mass() > nominal.total_mass());
  // Joint origins living on the pelvis do not move.
  int hip = nominal.joint_index("hip_pitch");
  CHECK((longer.joint(hip).origin.position - nominal.joint(hip).origin.position).norm() == 0.0);
}

TEST_CASE("resolved model exposes joint-side motor data") {
  KinematicModel m = load_model(preset_path("toy_robot.json"));
  ResolvedModel r = resolve(m);
  int hip = r.joint_index("hip_pitch");
  const MotorSpec& motor = m.motor_catalog[m.motor_index(m.motor_bindings.at("hip_pitch"))];
  CHECK(r.joint(hip).has_motor);
  CHECK(r.joint(hip).inv_gear_ratio == motor.inv_gear_ratio);
  CHECK(r.joint(hip).rotor_inertia == motor.rotor_inertia);
  CHECK(r.joint(hip).joint_torque_max == motor.torque_max);

  KinematicModel h = load_model(preset_path("toy_human_a.json"));
  ResolvedModel rh = resolve(h);
  CHECK(rh.actuation() == ActuationKind::kDirect);
  CHECK_FALSE(rh.joint(0).has_motor);
  CHECK(rh.joint(0).inv_gear_ratio == 1.0);
}
