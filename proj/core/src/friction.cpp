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

#include "colift/friction.hpp"

#include <cmath>

namespace colift {

FrictionModel build_friction_model(const std::vector<ContactSpec>& contacts,
                                   const Eigen::Matrix3d& reference_rotation,
                                   double min_normal_force) {
  int rows = 0;
  for (const auto& c : contacts) {
    if (c.kind == ContactKind::kEnvironment) rows += 11;
  }

  FrictionModel model;
  model.C = Eigen::MatrixXd::Zero(rows, 6 * static_cast<int>(contacts.size()));
  model.b = Eigen::VectorXd::Zero(rows);
  model.row_contact.assign(rows, -1);

  int r = 0;
  for (std::size_t c = 0; c < contacts.size(); ++c) {
    const ContactSpec& contact = contacts[c];
    if (contact.kind != ContactKind::kEnvironment) continue;
    const double mu_t = contact.friction / std::sqrt(2.0);

    // Rows over the local wrench (f', m') with z the contact normal. CoP of a
    // planar contact: x_cop = -m'_y / f'_z, y_cop = m'_x / f'_z.
    Eigen::Matrix<double, 11, 6> rows_local = Eigen::Matrix<double, 11, 6>::Zero();
    Eigen::Matrix<double, 11, 1> b_local = Eigen::Matrix<double, 11, 1>::Zero();
    rows_local(0, 2) = -1.0;
    b_local(0) = -min_normal_force;
    rows_local(1, 0) = 1.0;
    rows_local(1, 2) = -mu_t;
    rows_local(2, 0) = -1.0;
    rows_local(2, 2) = -mu_t;
    rows_local(3, 1) = 1.0;
    rows_local(3, 2) = -mu_t;
    rows_local(4, 1) = -1.0;
    rows_local(4, 2) = -mu_t;
    rows_local(5, 4) = -1.0;
    rows_local(5, 2) = -contact.cop_max.x();
    rows_local(6, 4) = 1.0;
    rows_local(6, 2) = contact.cop_min.x();
    rows_local(7, 3) = 1.0;
    rows_local(7, 2) = -contact.cop_max.y();
    rows_local(8, 3) = -1.0;
    rows_local(8, 2) = contact.cop_min.y();
    rows_local(9, 5) = 1.0;
    rows_local(9, 2) = -contact.torsion_coeff;
    rows_local(10, 5) = -1.0;
    rows_local(10, 2) = -contact.torsion_coeff;

    // World wrench -> local wrench columns.
    Eigen::Matrix<double, 6, 6> world_to_local = Eigen::Matrix<double, 6, 6>::Zero();
    world_to_local.topLeftCorner<3, 3>() = reference_rotation.transpose();
    world_to_local.bottomRightCorner<3, 3>() = reference_rotation.transpose();

    model.C.block<11, 6>(r, 6 * static_cast<int>(c)) = rows_local * world_to_local;
    model.b.segment<11>(r) = b_local;
    for (int k = 0; k < 11; ++k) model.row_contact[r + k] = static_cast<int>(c);
    r += 11;
  }
  return model;
}

double friction_violation(const FrictionModel& model, const Eigen::VectorXd& wrenches) {
  if (model.C.rows() == 0) return 0.0;
  return (model.C * wrenches - (model.b.array() - model.margin).matrix()).maxCoeff();
}

}  // namespace colift
