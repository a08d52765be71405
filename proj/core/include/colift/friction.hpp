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

#ifndef COLIFT_FRICTION_HPP_
#define COLIFT_FRICTION_HPP_

#include <vector>

#include <Eigen/Core>

#include "colift/composite.hpp"

namespace colift {

/// Linearized wrench feasibility C f <= b over the stacked contact wrench
/// vector (6 slots per contact, world coordinates). Environment contacts get
/// 11 rows each: a minimum normal force, a 4-facet friction pyramid with the
/// conservative mu/sqrt(2) tangential bound, the center-of-pressure rectangle,
/// and a torsional moment bound. Grasp contacts are bilateral and contribute
/// no rows. The interior {f : C f < b} contains every pure-normal-load wrench
/// above the minimum force.
struct FrictionModel {
  Eigen::MatrixXd C;
  Eigen::VectorXd b;
  double margin = 1e-6;          // solved postures satisfy C f <= b - margin
  int pyramid_facets = 4;
  std::vector<int> row_contact;  // contact index owning each row
};

/// `reference_rotation` is the world orientation the contact frames are held
/// at (the posture problem pins them there), so the cone can be expressed
/// with constant coefficients; local frame z is the contact normal.
FrictionModel build_friction_model(
    const std::vector<ContactSpec>& contacts,
    const Eigen::Matrix3d& reference_rotation = Eigen::Matrix3d::Identity(),
    double min_normal_force = 0.0);

/// Largest violation of C f <= b - margin; <= 0 means strictly feasible.
double friction_violation(const FrictionModel& model, const Eigen::VectorXd& wrenches);

}  // namespace colift

#endif  // COLIFT_FRICTION_HPP_
