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

#include "colift/dynamics.hpp"
#include "colift/kinematics.hpp"
#include "colift/model_io.hpp"
#include "colift/resolved_model.hpp"
#include "colift/rng.hpp"
#include "test_helpers.hpp"

using namespace colift;
using colift::testing::perturb_state;
using colift::testing::preset_path;
using colift::testing::random_state;
using colift::testing::two_link_model;
using colift::testing::TwoLink;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kG = 9.81;

// Closed-form double-pendulum terms derived from the Lagrangian of two
// uniform cylinders rotating about +y and hanging along -z. Acts as the
// independent oracle for the recursive implementation.
struct PendulumOracle {
  double m1, m2, lc1, lc2, l1, i1, i2;

  explicit PendulumOracle(const TwoLink& p) {
    m1 = p.rho1 * kPi * p.r1 * p.r1 * p.l1;
    m2 = p.rho2 * kPi * p.r2 * p.r2 * p.l2;
    l1 = p.l1;
    lc1 = p.l1 / 2;
    lc2 = p.l2 / 2;
    i1 = m1 * (3 * p.r1 * p.r1 + p.l1 * p.l1) / 12;
    i2 = m2 * (3 * p.r2 * p.r2 + p.l2 * p.l2) / 12;
  }

  Eigen::Matrix2d mass(double q2) const {
    const double c2 = std::cos(q2);
    Eigen::Matrix2d m;
    m(0, 0) = i1 + i2 + m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2 * l1 * lc2 * c2);
    m(0, 1) = i2 + m2 * (lc2 * lc2 + l1 * lc2 * c2);
    m(1, 0) = m(0, 1);
    m(1, 1) = i2 + m2 * lc2 * lc2;
    return m;
  }

  Eigen::Vector2d bias(double q1, double q2, double qd1, double qd2) const {
    const double s2 = std::sin(q2);
    Eigen::Vector2d h;
    h[0] = -m2 * l1 * lc2 * s2 * (2 * qd1 * qd2 + qd2 * qd2);
    h[1] = m2 * l1 * lc2 * s2 * qd1 * qd1;
    h[0] += kG * ((m1 * lc1 + m2 * l1) * std::sin(q1) + m2 * lc2 * std::sin(q1 + q2));
    h[1] += kG * m2 * lc2 * std::sin(q1 + q2);
    return h;
  }
};

double potential_energy(const ResolvedModel& model, const SystemState& state,
                        const Eigen::Vector3d& gravity) {
  KinematicsCache cache = compute_kinematics(model, state);
  double v = 0;
  for (int l = 0; l < model.num_links(); ++l) {
    const auto& body = model.link(l).body;
    v -= body.mass * gravity.dot(cache.link_pose[l] * body.com);
  }
  return v;
}

}  // namespace

TEST_CASE("two-link mass matrix and bias match the symbolic Lagrangian") {
  TwoLink params;
  ResolvedModel r = resolve(two_link_model(params));
  PendulumOracle oracle(params);
  Rng rng(31);
  // the base stays clamped at the identity with zero velocity, so the joint
  // block is the fixed-base dynamics
  for (int t = 0; t < 1000; ++t) {
    SystemState s = SystemState::zero(2);
    double q1 = rng.uniform(-kPi, kPi), q2 = rng.uniform(-kPi, kPi);
    double qd1 = rng.uniform(-3, 3), qd2 = rng.uniform(-3, 3);
    s.joint_positions << q1, q2;
    s.velocity[6] = qd1;
    s.velocity[7] = qd2;

    Eigen::MatrixXd m = mass_matrix(r, s);
    REQUIRE(m.rows() == 8);
    CHECK((m.bottomRightCorner<2, 2>() - oracle.mass(q2)).cwiseAbs().maxCoeff() ==
          doctest::Approx(0).epsilon(1e-8));

    Eigen::VectorXd h = bias_forces(r, s);
    CHECK((h.tail<2>() - oracle.bias(q1, q2, qd1, qd2)).cwiseAbs().maxCoeff() ==
          doctest::Approx(0).epsilon(1e-8));
  }
}

TEST_CASE("mass matrix is symmetric positive definite in floating base") {
  ResolvedModel r = resolve(load_model(preset_path("toy_robot.json")));
  Rng rng(32);
  for (int t = 0; t < 25; ++t) {
    SystemState s = random_state(r.num_joints(), rng);
    Eigen::MatrixXd m = mass_matrix(r, s);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-10));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    CHECK(eig.eigenvalues().minCoeff() > 0);
    // top-left block is the total mass times identity
    CHECK((m.topLeftCorner<3, 3>() - r.total_mass() * Eigen::Matrix3d::Identity()).norm() ==
          doctest::Approx(0).epsilon(1e-10));
  }
}

TEST_CASE("gravity bias is the gradient of the potential energy") {
  Rng rng(33);
  for (const char* name : {"toy_robot.json", "toy_human_a.json"}) {
    ResolvedModel r = resolve(load_model(preset_path(name)));
    const int nv = r.velocity_size();
    for (int t = 0; t < 10; ++t) {
      SystemState s = random_state(r.num_joints(), rng);
      s.velocity.setZero();
      Eigen::VectorXd h = bias_forces(r, s);
      const double eps = 1e-6;
      for (int i = 0; i < nv; ++i) {
        double plus = potential_energy(r, perturb_state(s, i, eps), default_gravity());
        double minus = potential_energy(r, perturb_state(s, i, -eps), default_gravity());
        CHECK(h[i] == doctest::Approx((plus - minus) / (2 * eps)).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("bias at zero velocity carries the full weight in the linear rows") {
  ResolvedModel r = resolve(load_model(preset_path("toy_human_b.json")));
  Rng rng(34);
  SystemState s = random_state(r.num_joints(), rng);
  s.velocity.setZero();
  Eigen::VectorXd h = bias_forces(r, s);
  CHECK(h[0] == doctest::Approx(0).epsilon(1e-10));
  CHECK(h[1] == doctest::Approx(0).epsilon(1e-10));
  CHECK(h[2] == doctest::Approx(r.total_mass() * kG).epsilon(1e-10));
}

TEST_CASE("motor reflection follows the catalog exactly") {
  ResolvedModel r = resolve(load_model(preset_path("toy_robot.json")));
  MotorReflection refl = motor_reflected_terms(r);
  REQUIRE(refl.reflected_inertia.size() == 4);
  for (int j = 0; j < 4; ++j) {
    const auto& joint = r.joint(j);
    CHECK(refl.reflected_inertia[j] ==
          joint.inv_gear_ratio * joint.inv_gear_ratio * joint.rotor_inertia);
    CHECK(refl.input_scale[j] == joint.inv_gear_ratio);
    CHECK(refl.reflected_viscous[j] ==
          joint.inv_gear_ratio * joint.inv_gear_ratio * joint.viscous_friction);
  }

  // direct-drive humans reflect nothing
  ResolvedModel h = resolve(load_model(preset_path("toy_human_a.json")));
  MotorReflection hrefl = motor_reflected_terms(h);
  CHECK(hrefl.reflected_inertia.norm() == 0.0);
  CHECK((hrefl.input_scale - Eigen::VectorXd::Ones(h.num_joints())).norm() == 0.0);
}

TEST_CASE("catalog motors hit the published reflected inertias") {
  KinematicModel m = load_model(preset_path("icub_like.json"));
  auto reflected = [&](const char* id) {
    const MotorSpec& spec = m.motor_catalog[m.motor_index(id)];
    return spec.inv_gear_ratio * spec.inv_gear_ratio * spec.rotor_inertia;
  };
  CHECK(reflected("S") == 1.0);
  CHECK(reflected("M") == 25.6);
  CHECK(reflected("L") == 25.6);
}

TEST_CASE("augmented mass matrix adds reflected inertia on the joint diagonal") {
  ResolvedModel r = resolve(load_model(preset_path("toy_robot.json")));
  Rng rng(35);
  SystemState s = random_state(r.num_joints(), rng);
  Eigen::MatrixXd m = mass_matrix(r, s);
  Eigen::MatrixXd ma = augmented_mass_matrix(r, s);
  Eigen::MatrixXd diff = ma - m;
  MotorReflection refl = motor_reflected_terms(r);
  CHECK((diff.bottomRightCorner(4, 4).diagonal() - refl.reflected_inertia).norm() ==
        doctest::Approx(0).epsilon(1e-14));
  diff.bottomRightCorner(4, 4).diagonal().setZero();
  CHECK(diff.norm() == 0.0);
}

TEST_CASE("static residual balances an external wrench through the jacobian") {
  TwoLink params;
  ResolvedModel r = resolve(two_link_model(params));
  Rng rng(36);
  for (int t = 0; t < 20; ++t) {
    SystemState s = SystemState::zero(2);
    s.joint_positions << rng.uniform(-1, 1), rng.uniform(-1, 1);

    Eigen::VectorXd h = bias_forces(r, s);
    ContactWrench w;
    w.frame = "tip";
    for (int i = 0; i < 6; ++i) w.wrench[i] = rng.uniform(-5, 5);
    Eigen::MatrixXd jac = frame_jacobian(r, s, "tip");
    // residual = h - S tau - J^T w; choosing tau as the leftover joint rows
    // must zero the joint block
    Eigen::VectorXd lever = jac.transpose() * w.wrench;
    Eigen::VectorXd tau = (h - lever).tail(2);
    Eigen::VectorXd res = full_dynamics_residual(r, s, tau, {w});
    CHECK(res.tail<2>().cwiseAbs().maxCoeff() == doctest::Approx(0).epsilon(1e-10));
    CHECK((res.head<6>() - (h - lever).head<6>()).cwiseAbs().maxCoeff() ==
          doctest::Approx(0).epsilon(1e-10));
  }
}
