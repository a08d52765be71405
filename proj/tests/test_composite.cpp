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

#include <doctest.h>
#include <Eigen/Dense>

#include "colift/composite.hpp"
#include "colift/dynamics.hpp"
#include "colift/kinematics.hpp"
#include "colift/rng.hpp"
#include "colift/scenario.hpp"
#include "test_helpers.hpp"

using namespace colift;
using colift::testing::preset_path;
using colift::testing::random_state;

namespace {

struct Fixture {
  Scenario scenario;
  CompositeSystem system;
  ResolvedComposite resolved;

  Fixture()
      : scenario(load_scenario(preset_path("toy_scene.json"))),
        system(make_composite(scenario, 0, 0)),
        resolved(resolve_composite(system, scenario.robot.nominal_params())) {}
};

}  // namespace

TEST_CASE("composite validates and lays out human, robot, load") {
  Fixture f;
  CHECK(f.system.validate().empty());
  CompositeLayout lay = f.resolved.layout();
  CHECK(lay.n1 == 4);
  CHECK(lay.n2 == 4);
  CHECK(lay.num_contacts == 6);  // two feet plus four grasping hands
  CHECK(lay.velocity_size() == 18 + 8);
  CHECK(lay.torque_size() == 8);
  CHECK(lay.human_offset() == 0);
  CHECK(lay.robot_offset() == 10);
  CHECK(lay.load_offset() == 20);
}

TEST_CASE("composite gravity bias is the stacked per-agent bias") {
  Fixture f;
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    SystemState hs = random_state(4, rng);
    SystemState rs = random_state(4, rng);
    SystemState ls = random_state(0, rng);
    hs.velocity.setZero();
    rs.velocity.setZero();
    ls.velocity.setZero();
    Eigen::VectorXd h = composite_gravity_bias(f.resolved, hs, rs, ls);
    CompositeLayout lay = f.resolved.layout();
    CHECK((h.segment(lay.human_offset(), 10) - bias_forces(f.resolved.human, hs)).norm() ==
          doctest::Approx(0).epsilon(1e-12));
    CHECK((h.segment(lay.robot_offset(), 10) - bias_forces(f.resolved.robot, rs)).norm() ==
          doctest::Approx(0).epsilon(1e-12));
    CHECK((h.segment(lay.load_offset(), 6) - bias_forces(f.resolved.load, ls)).norm() ==
          doctest::Approx(0).epsilon(1e-12));
  }
}

TEST_CASE("applied torques scale robot rows by the gear and pass humans through") {
  Fixture f;
  Rng rng(42);
  Eigen::VectorXd tau(8);
  for (int i = 0; i < 8; ++i) tau[i] = rng.uniform(-10, 10);
  Eigen::VectorXd b = composite_applied_torques(f.resolved, tau);
  MotorReflection refl = motor_reflected_terms(f.resolved.robot);
  CompositeLayout lay = f.resolved.layout();
  CHECK(b.segment(lay.human_offset(), 6).norm() == 0.0);
  CHECK(b.segment(lay.robot_offset(), 6).norm() == 0.0);
  CHECK(b.segment(lay.load_offset(), 6).norm() == 0.0);
  CHECK((b.segment(lay.robot_offset() + 6, 4) -
         refl.input_scale.cwiseProduct(tau.head(4))).norm() == doctest::Approx(0).epsilon(1e-14));
  CHECK((b.segment(lay.human_offset() + 6, 4) - tau.tail(4)).norm() ==
        doctest::Approx(0).epsilon(1e-14));
  CHECK_THROWS_AS(composite_applied_torques(f.resolved, Eigen::VectorXd::Zero(5)), ContractError);
}

TEST_CASE("coupling matrix stacks owner jacobians against load jacobians") {
  Fixture f;
  Rng rng(43);
  SystemState hs = random_state(4, rng);
  SystemState rs = random_state(4, rng);
  SystemState ls = random_state(0, rng);
  Eigen::MatrixXd q = coupling_matrix(f.resolved, hs, rs, ls);
  CompositeLayout lay = f.resolved.layout();
  REQUIRE(q.rows() == 36);
  REQUIRE(q.cols() == lay.velocity_size());
  for (int c = 0; c < lay.num_contacts; ++c) {
    const ContactSpec& contact = f.resolved.contacts[c];
    const bool human = contact.owner == AgentRole::kHuman;
    const ResolvedModel& owner = human ? f.resolved.human : f.resolved.robot;
    const SystemState& os = human ? hs : rs;
    Eigen::MatrixXd j = frame_jacobian(owner, os, contact.frame);
    int col = human ? lay.human_offset() : lay.robot_offset();
    CHECK((q.block(6 * c, col, 6, 10) - j).cwiseAbs().maxCoeff() ==
          doctest::Approx(0).epsilon(1e-12));
    Eigen::MatrixXd load_block = q.block(6 * c, lay.load_offset(), 6, 6);
    if (contact.kind == ContactKind::kGrasp) {
      Eigen::MatrixXd jl = frame_jacobian(f.resolved.load, ls, contact.paired_load_frame);
      CHECK((load_block + jl).cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-12));
    } else {
      CHECK(load_block.norm() == 0.0);
    }
  }
}

TEST_CASE("static residual recomposes from bias, torques and coupling") {
  Fixture f;
  Rng rng(44);
  for (int t = 0; t < 5; ++t) {
    SystemState hs = random_state(4, rng);
    SystemState rs = random_state(4, rng);
    SystemState ls = random_state(0, rng);
    hs.velocity.setZero();
    rs.velocity.setZero();
    ls.velocity.setZero();
    Eigen::VectorXd tau(8), w(36);
    for (int i = 0; i < 8; ++i) tau[i] = rng.uniform(-20, 20);
    for (int i = 0; i < 36; ++i) w[i] = rng.uniform(-50, 50);
    Eigen::VectorXd res = composite_static_residual(f.resolved, hs, rs, ls, tau, w);
    Eigen::VectorXd expect = composite_gravity_bias(f.resolved, hs, rs, ls) -
                             composite_applied_torques(f.resolved, tau) -
                             coupling_matrix(f.resolved, hs, rs, ls).transpose() * w;
    CHECK((res - expect).cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-10));
  }
}

TEST_CASE("load model carries the scene mass and grasp frames") {
  Fixture f;
  KinematicModel load = make_load_model(f.scenario.loads[0]);
  ResolvedModel r = resolve(load);
  CHECK(r.total_mass() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.num_joints() == 0);
  for (const char* g : {"human_left_grip", "human_right_grip", "robot_left_grip",
                        "robot_right_grip"})
    CHECK(r.has_frame(g));
}

TEST_CASE("composite validation rejects dangling contact frames") {
  Fixture f;
  CompositeSystem broken = f.system;
  broken.contacts[0].frame = "nope";
  CHECK_FALSE(broken.validate().empty());
  CompositeSystem broken2 = f.system;
  for (auto& c : broken2.contacts) {
    if (c.kind == ContactKind::kGrasp) {
      c.paired_load_frame = "nope";
      break;
    }
  }
  CHECK_FALSE(broken2.validate().empty());
}
