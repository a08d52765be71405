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

#include "colift/shapes.hpp"

using namespace colift;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("box inertia matches the analytic formula") {
  ShapePrimitive s;
  s.kind = ShapeKind::kBox;
  s.dims = Eigen::Vector3d(0.3, 0.2, 0.5);
  BodyInertia b = link_inertia(s, 800.0, 1.0);
  double m = 800.0 * 0.3 * 0.2 * 0.5;
  CHECK(b.mass == doctest::Approx(m).epsilon(1e-12));
  CHECK(b.com.norm() == 0.0);
  CHECK(b.inertia(0, 0) == doctest::Approx(m / 12 * (0.2 * 0.2 + 0.5 * 0.5)).epsilon(1e-12));
  CHECK(b.inertia(1, 1) == doctest::Approx(m / 12 * (0.3 * 0.3 + 0.5 * 0.5)).epsilon(1e-12));
  CHECK(b.inertia(2, 2) == doctest::Approx(m / 12 * (0.3 * 0.3 + 0.2 * 0.2)).epsilon(1e-12));
  CHECK(b.inertia(0, 1) == 0.0);
}

TEST_CASE("cylinder inertia matches the analytic formula") {
  ShapePrimitive s;
  s.kind = ShapeKind::kCylinder;
  s.dims = Eigen::Vector3d(0.05, 0.8, 0);  // radius, length along growth axis z
  BodyInertia b = link_inertia(s, 1200.0, 1.0);
  double m = 1200.0 * kPi * 0.05 * 0.05 * 0.8;
  CHECK(b.mass == doctest::Approx(m).epsilon(1e-12));
  double trans = m * (3 * 0.05 * 0.05 + 0.8 * 0.8) / 12;
  CHECK(b.inertia(0, 0) == doctest::Approx(trans).epsilon(1e-12));
  CHECK(b.inertia(1, 1) == doctest::Approx(trans).epsilon(1e-12));
  CHECK(b.inertia(2, 2) == doctest::Approx(m * 0.05 * 0.05 / 2).epsilon(1e-12));
}

TEST_CASE("sphere inertia matches the analytic formula") {
  ShapePrimitive s;
  s.kind = ShapeKind::kSphere;
  s.dims = Eigen::Vector3d(0.1, 0, 0);
  BodyInertia b = link_inertia(s, 500.0, 1.0);
  double m = 500.0 * 4.0 / 3.0 * kPi * 0.001;
  CHECK(b.mass == doctest::Approx(m).epsilon(1e-12));
  for (int i = 0; i < 3; ++i)
    CHECK(b.inertia(i, i) == doctest::Approx(0.4 * m * 0.01).epsilon(1e-12));
}

TEST_CASE("length multiplier scales the growth axis only") {
  ShapePrimitive s;
  s.kind = ShapeKind::kCylinder;
  s.dims = Eigen::Vector3d(0.05, 0.8, 0);
  s.center_offset = Eigen::Vector3d(0, 0, -0.4);
  double lm = 1.5;
  BodyInertia scaled = link_inertia(s, 1200.0, lm);
  // A cylinder of length 1.2 with the offset scaled the same way.
  ShapePrimitive ref = s;
  ref.dims[1] = 0.8 * lm;
  ref.center_offset = Eigen::Vector3d(0, 0, -0.4 * lm);
  BodyInertia expect = link_inertia(ref, 1200.0, 1.0);
  CHECK(scaled.mass == doctest::Approx(expect.mass).epsilon(1e-12));
  CHECK((scaled.com - expect.com).norm() == doctest::Approx(0).epsilon(1e-12));
  CHECK((scaled.inertia - expect.inertia).norm() == doctest::Approx(0).epsilon(1e-12));
  CHECK(shape_volume(s, lm) == doctest::Approx(shape_volume(ref, 1.0)).epsilon(1e-12));
}

TEST_CASE("box growth axis stretches the chosen dimension") {
  ShapePrimitive s;
  s.kind = ShapeKind::kBox;
  s.dims = Eigen::Vector3d(0.2, 0.3, 0.4);
  s.growth_axis = 1;
  BodyInertia grown = link_inertia(s, 1000.0, 2.0);
  ShapePrimitive ref = s;
  ref.dims[1] = 0.6;
  BodyInertia expect = link_inertia(ref, 1000.0, 1.0);
  CHECK(grown.mass == doctest::Approx(expect.mass).epsilon(1e-12));
  CHECK((grown.inertia - expect.inertia).norm() == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("center offset shifts the com without touching the mass") {
  ShapePrimitive s;
  s.kind = ShapeKind::kBox;
  s.dims = Eigen::Vector3d(0.2, 0.2, 0.2);
  s.center_offset = Eigen::Vector3d(0.1, -0.2, 0.3);
  BodyInertia b = link_inertia(s, 1000.0, 1.0);
  CHECK((b.com - s.center_offset).norm() == doctest::Approx(0).epsilon(1e-12));
  CHECK(b.mass == doctest::Approx(8.0).epsilon(1e-12));
}
