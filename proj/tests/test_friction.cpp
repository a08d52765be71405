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
#include <cmath>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "colift/friction.hpp"
#include "colift/math_utils.hpp"
#include "colift/rng.hpp"

using namespace colift;

namespace {

ContactSpec env_contact(double mu, Eigen::Vector2d cop_min, Eigen::Vector2d cop_max,
                        double torsion) {
  ContactSpec c;
  c.owner = AgentRole::kHuman;
  c.frame = "foot";
  c.kind = ContactKind::kEnvironment;
  c.friction = mu;
  c.cop_min = cop_min;
  c.cop_max = cop_max;
  c.torsion_coeff = torsion;
  return c;
}

// Direct statement of the admissible-wrench conditions, evaluated without the
// matrix machinery: inner pyramid, CoP rectangle, torsion bound.
double direct_violation(const ContactSpec& c, const Eigen::Matrix<double, 6, 1>& w,
                        double margin) {
  const double fx = w[0], fy = w[1], fz = w[2];
  const double mx = w[3], my = w[4], mz = w[5];
  const double mu_t = c.friction / std::sqrt(2.0);
  std::vector<double> lhs = {
      -fz,
      std::abs(fx) - mu_t * fz,
      std::abs(fy) - mu_t * fz,
      -my - c.cop_max.x() * fz,
      my + c.cop_min.x() * fz,
      mx - c.cop_max.y() * fz,
      -mx + c.cop_min.y() * fz,
      std::abs(mz) - c.torsion_coeff * fz,
  };
  return *std::max_element(lhs.begin(), lhs.end()) + margin;
}

}  // namespace

TEST_CASE("friction rows match a direct wrench-condition scan") {
  ContactSpec c = env_contact(0.7, {-0.04, -0.03}, {0.09, 0.05}, 0.12);
  FrictionModel model = build_friction_model({c});
  REQUIRE(model.C.rows() == 11);
  REQUIRE(model.C.cols() == 6);
  Rng rng(51);
  for (int t = 0; t < 5000; ++t) {
    Eigen::Matrix<double, 6, 1> w;
    for (int i = 0; i < 3; ++i) w[i] = rng.uniform(-100, 150);
    for (int i = 3; i < 6; ++i) w[i] = rng.uniform(-20, 20);
    double got = friction_violation(model, w);
    double want = direct_violation(c, w, model.margin);
    CHECK(got == doctest::Approx(want).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("grasp contacts produce no friction rows") {
  ContactSpec g;
  g.owner = AgentRole::kRobot;
  g.frame = "hand";
  g.kind = ContactKind::kGrasp;
  g.paired_load_frame = "grip";
  FrictionModel model = build_friction_model({g});
  CHECK(model.C.rows() == 0);
  CHECK(friction_violation(model, Eigen::VectorXd::Constant(6, 1e9)) == 0.0);
}

TEST_CASE("rows land on the owning contact's wrench block") {
  ContactSpec foot = env_contact(0.8, {-0.05, -0.05}, {0.05, 0.05}, 0.1);
  ContactSpec g;
  g.owner = AgentRole::kRobot;
  g.frame = "hand";
  g.kind = ContactKind::kGrasp;
  g.paired_load_frame = "grip";
  FrictionModel model = build_friction_model({g, foot});
  REQUIRE(model.C.rows() == 11);
  REQUIRE(model.C.cols() == 12);
  CHECK(model.C.leftCols(6).norm() == 0.0);  // grasp block untouched
  for (int r = 0; r < 11; ++r) CHECK(model.row_contact[r] == 1);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(12);
  w[2 + 6] = 100.0;  // firm flat push on the foot
  CHECK(friction_violation(model, w) <= 0.0);
  w[0 + 6] = 90.0;  // sideways beyond the pyramid
  CHECK(friction_violation(model, w) > 0.0);
}

TEST_CASE("reference rotation tilts the admissible set") {
  ContactSpec c = env_contact(0.5, {-0.05, -0.05}, {0.05, 0.05}, 0.1);
  Eigen::Matrix3d tilt = rpy_to_rotation(Eigen::Vector3d(0.3, -0.2, 0.4));
  FrictionModel tilted = build_friction_model({c}, tilt);
  FrictionModel flat = build_friction_model({c});
  Rng rng(52);
  for (int t = 0; t < 200; ++t) {
    Eigen::Matrix<double, 6, 1> w;
    for (int i = 0; i < 6; ++i) w[i] = rng.uniform(-50, 80);
    Eigen::Matrix<double, 6, 1> w_world;
    w_world.head<3>() = tilt * w.head<3>();
    w_world.tail<3>() = tilt * w.tail<3>();
    CHECK(friction_violation(tilted, w_world) ==
          doctest::Approx(friction_violation(flat, w)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("minimum normal force shifts only the unilateral row") {
  ContactSpec c = env_contact(0.8, {-0.05, -0.05}, {0.05, 0.05}, 0.1);
  FrictionModel model = build_friction_model({c}, Eigen::Matrix3d::Identity(), 5.0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
  w[2] = 4.0;
  CHECK(friction_violation(model, w) > 0.0);
  w[2] = 6.0;
  CHECK(friction_violation(model, w) <= 0.0);
}
