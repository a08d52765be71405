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

#ifndef COLIFT_SHAPES_HPP_
#define COLIFT_SHAPES_HPP_

#include <Eigen/Core>

namespace colift {

enum class ShapeKind { kSphere, kCylinder, kBox };

/// Solid primitive used to model a link. Dimensions by kind:
///   sphere:   dims = (radius, -, -)
///   cylinder: dims = (radius, length, -), symmetry axis along local z
///   box:      dims = (ex, ey, ez) full extents along local axes
/// The length multiplier of the owning link scales the dimension along
/// `growth_axis` (0=x, 1=y, 2=z); for a cylinder the growth axis must be its
/// symmetry axis, for a sphere any axis selects the radius.
/// `center_offset` places the shape centroid in the link frame; its
/// growth-axis component scales with the multiplier as well, so the center of
/// mass tracks the stretched geometry.
struct ShapePrimitive {
  ShapeKind kind = ShapeKind::kBox;
  Eigen::Vector3d dims = Eigen::Vector3d::Zero();
  int growth_axis = 2;
  Eigen::Vector3d center_offset = Eigen::Vector3d::Zero();
};

/// Mass, center of mass (link frame) and rotational inertia about the center
/// of mass, expressed in link axes.
struct BodyInertia {
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
};

/// Closed-form solid inertia of `shape` at density `density` with the
/// growth-axis dimension scaled by `length_multiplier`.
/// Throws ModelError for non-positive dimensions, density or multiplier, or
/// for a growth axis the shape cannot grow along.
BodyInertia link_inertia(const ShapePrimitive& shape, double density, double length_multiplier);

/// Volume of the scaled shape (used for density <-> mass conversions).
double shape_volume(const ShapePrimitive& shape, double length_multiplier);

}  // namespace colift

#endif  // COLIFT_SHAPES_HPP_
