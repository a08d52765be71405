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

#include "colift/shapes.hpp"

#include <cmath>

#include "colift/errors.hpp"

namespace colift {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ModelError(std::string("invalid shape: non-positive ") + what);
  }
}

struct ScaledDims {
  Eigen::Vector3d dims;
};

ScaledDims scale_shape(const ShapePrimitive& shape, double lm) {
  check_positive(lm, "length multiplier");
  if (shape.growth_axis < 0 || shape.growth_axis > 2) {
    throw ModelError("invalid shape: growth axis out of range");
  }
  Eigen::Vector3d d = shape.dims;
  switch (shape.kind) {
    case ShapeKind::kSphere:
      check_positive(d(0), "sphere radius");
      d(0) *= lm;
      break;
    case ShapeKind::kCylinder:
      check_positive(d(0), "cylinder radius");
      check_positive(d(1), "cylinder length");
      if (shape.growth_axis != 2) {
        throw ModelError("invalid shape: cylinder growth axis must be its symmetry axis (z)");
      }
      d(1) *= lm;
      break;
    case ShapeKind::kBox:
      check_positive(d(0), "box extent x");
      check_positive(d(1), "box extent y");
      check_positive(d(2), "box extent z");
      d(shape.growth_axis) *= lm;
      break;
  }
  return {d};
}

}  // namespace

double shape_volume(const ShapePrimitive& shape, double length_multiplier) {
  const Eigen::Vector3d d = scale_shape(shape, length_multiplier).dims;
  switch (shape.kind) {
    case ShapeKind::kSphere:
      return 4.0 / 3.0 * M_PI * d(0) * d(0) * d(0);
    case ShapeKind::kCylinder:
      return M_PI * d(0) * d(0) * d(1);
    case ShapeKind::kBox:
      return d(0) * d(1) * d(2);
  }
  return 0.0;
}

BodyInertia link_inertia(const ShapePrimitive& shape, double density, double length_multiplier) {
  check_positive(density, "density");
  const Eigen::Vector3d d = scale_shape(shape, length_multiplier).dims;

  BodyInertia out;
  out.mass = density * shape_volume(shape, length_multiplier);
  out.com = shape.center_offset;
  out.com(shape.growth_axis) *= length_multiplier;

  Eigen::Vector3d diag;
  switch (shape.kind) {
    case ShapeKind::kSphere: {
      const double i = 0.4 * out.mass * d(0) * d(0);
      diag = Eigen::Vector3d::Constant(i);
      break;
    }
    case ShapeKind::kCylinder: {
      const double r = d(0), len = d(1);
      const double ixy = out.mass * (3.0 * r * r + len * len) / 12.0;
      diag = Eigen::Vector3d(ixy, ixy, 0.5 * out.mass * r * r);
      break;
    }
    case ShapeKind::kBox: {
      const double k = out.mass / 12.0;
      diag = Eigen::Vector3d(k * (d(1) * d(1) + d(2) * d(2)),
                             k * (d(0) * d(0) + d(2) * d(2)),
                             k * (d(0) * d(0) + d(1) * d(1)));
      break;
    }
  }
  out.inertia = diag.asDiagonal();
  return out;
}

}  // namespace colift
