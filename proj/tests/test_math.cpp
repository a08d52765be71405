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
#include <Eigen/Geometry>

#include "colift/math_utils.hpp"
#include "colift/rng.hpp"
#include "test_helpers.hpp"

using namespace colift;
using colift::testing::random_quaternion;

TEST_CASE("skew matches cross product") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    Eigen::Vector3d a(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    Eigen::Vector3d b(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    CHECK((skew(a) * b - a.cross(b)).norm() == doctest::Approx(0).epsilon(1e-14));
    CHECK((unskew(skew(a)) - a).norm() == doctest::Approx(0).epsilon(1e-14));
    CHECK((skew(a) + skew(a).transpose()).norm() == 0.0);
  }
}

TEST_CASE("quaternion to rotation agrees with Eigen") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    Eigen::Vector4d q = random_quaternion(rng);
    Eigen::Quaterniond eq(q[0], q[1], q[2], q[3]);  // scalar-first storage
    Eigen::Matrix3d r = quaternion_to_rotation(q);
    CHECK((r - eq.toRotationMatrix()).norm() == doctest::Approx(0).epsilon(1e-13));
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() ==
          doctest::Approx(0).epsilon(1e-13));
    CHECK(r.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("quaternion_to_rotation normalizes its argument") {
  Eigen::Vector4d q(2, 0, 0, 0);
  CHECK((quaternion_to_rotation(q) - Eigen::Matrix3d::Identity()).norm() ==
        doctest::Approx(0).epsilon(1e-14));
  CHECK_THROWS(quaternion_to_rotation(Eigen::Vector4d::Zero()));
}

TEST_CASE("rotation to quaternion round-trips") {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    Eigen::Vector4d q = random_quaternion(rng);
    Eigen::Vector4d back = rotation_to_quaternion(quaternion_to_rotation(q));
    CHECK(back[0] >= 0.0);  // canonical hemisphere
    double sign = q[0] >= 0 ? 1.0 : -1.0;
    CHECK((back - sign * q).norm() == doctest::Approx(0).epsilon(1e-12));
  }
}

TEST_CASE("quaternion multiply matches rotation composition") {
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    Eigen::Vector4d a = random_quaternion(rng);
    Eigen::Vector4d b = random_quaternion(rng);
    Eigen::Matrix3d lhs = quaternion_to_rotation(quaternion_multiply(a, b));
    Eigen::Matrix3d rhs = quaternion_to_rotation(a) * quaternion_to_rotation(b);
    CHECK((lhs - rhs).norm() == doctest::Approx(0).epsilon(1e-13));
    Eigen::Vector4d ident = quaternion_multiply(a, quaternion_conjugate(a));
    CHECK(quaternion_geodesic_angle(ident, quaternion_identity()) ==
          doctest::Approx(0).epsilon(1e-7));
  }
}

TEST_CASE("so3 exp and log invert each other") {
  Rng rng(15);
  for (int t = 0; t < 100; ++t) {
    Eigen::Vector3d w(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    if (w.norm() > 3.1) w *= 3.1 / w.norm();  // keep below pi so log is unique
    Eigen::Matrix3d r = so3_exp(w);
    Eigen::AngleAxisd aa(w.norm(), w.norm() > 1e-12 ? w.normalized()
                                                    : Eigen::Vector3d::UnitX());
    CHECK((r - aa.toRotationMatrix()).norm() == doctest::Approx(0).epsilon(1e-12));
    CHECK((so3_log(r) - w).norm() == doctest::Approx(0).epsilon(1e-9));
  }
  CHECK((so3_exp(Eigen::Vector3d::Zero()) - Eigen::Matrix3d::Identity()).norm() == 0.0);
}

TEST_CASE("rpy uses extrinsic XYZ order") {
  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    Eigen::Vector3d rpy(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    Eigen::Matrix3d expect =
        (Eigen::AngleAxisd(rpy[2], Eigen::Vector3d::UnitZ()) *
         Eigen::AngleAxisd(rpy[1], Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(rpy[0], Eigen::Vector3d::UnitX()))
            .toRotationMatrix();
    CHECK((rpy_to_rotation(rpy) - expect).norm() == doctest::Approx(0).epsilon(1e-13));
  }
}

TEST_CASE("pose composition and inverse") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    Pose a(quaternion_to_rotation(random_quaternion(rng)),
           Eigen::Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)));
    Pose b(quaternion_to_rotation(random_quaternion(rng)),
           Eigen::Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)));
    Eigen::Vector3d p(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    // (a*b)*p applied stepwise
    CHECK(((a * b) * p - a * (b * p)).norm() == doctest::Approx(0).epsilon(1e-13));
    Pose ident = a * a.inverse();
    CHECK((ident.rotation - Eigen::Matrix3d::Identity()).norm() ==
          doctest::Approx(0).epsilon(1e-13));
    CHECK(ident.position.norm() == doctest::Approx(0).epsilon(1e-13));
  }
}

TEST_CASE("rng streams are deterministic and well distributed") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(43);
  double mean = 0;
  for (int i = 0; i < 10000; ++i) mean += c.next_double();
  mean /= 10000;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.05));
  // derive_seed must differ across both lanes
  CHECK(Rng::derive_seed(1, 2, 3) != Rng::derive_seed(1, 2, 4));
  CHECK(Rng::derive_seed(1, 2, 3) != Rng::derive_seed(1, 3, 3));
  CHECK(Rng::derive_seed(1, 2, 3) == Rng::derive_seed(1, 2, 3));
  Rng d(44);
  for (int i = 0; i < 200; ++i) {
    int v = d.next_int(7);
    CHECK(v >= 0);
    CHECK(v < 7);
  }
}
