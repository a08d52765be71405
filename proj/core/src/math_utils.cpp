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

#include "colift/math_utils.hpp"

#include <cmath>

#include "colift/errors.hpp"

namespace colift {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Vector3d unskew(const Eigen::Matrix3d& m) {
  return 0.5 * Eigen::Vector3d(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
}

Eigen::Vector4d quaternion_normalized(const Eigen::Vector4d& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ContractError("degenerate quaternion: zero or non-finite norm");
  }
  return q / n;
}

Eigen::Matrix3d quaternion_to_rotation(const Eigen::Vector4d& q_wxyz) {
  const Eigen::Vector4d q = quaternion_normalized(q_wxyz);
  const double w = q(0);
  const Eigen::Vector3d v = q.tail<3>();
  const Eigen::Matrix3d sv = skew(v);
  // R = I + 2 w S(v) + 2 S(v)^2 for a unit quaternion.
  return Eigen::Matrix3d::Identity() + 2.0 * w * sv + 2.0 * sv * sv;
}

Eigen::Vector4d rotation_to_quaternion(const Eigen::Matrix3d& r) {
  Eigen::Quaterniond q(r);
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
}

Eigen::Vector4d quaternion_multiply(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  const double aw = a(0), bw = b(0);
  const Eigen::Vector3d av = a.tail<3>(), bv = b.tail<3>();
  Eigen::Vector4d out;
  out(0) = aw * bw - av.dot(bv);
  out.tail<3>() = aw * bv + bw * av + av.cross(bv);
  return out;
}

Eigen::Vector4d quaternion_conjugate(const Eigen::Vector4d& q) {
  return Eigen::Vector4d(q(0), -q(1), -q(2), -q(3));
}

Eigen::Vector4d quaternion_identity() { return Eigen::Vector4d(1.0, 0.0, 0.0, 0.0); }

double quaternion_geodesic_angle(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  const Eigen::Vector4d qa = quaternion_normalized(a);
  const Eigen::Vector4d qb = quaternion_normalized(b);
  const Eigen::Vector4d rel = quaternion_multiply(quaternion_conjugate(qa), qb);
  // atan2 form stays accurate near identity where acos loses digits.
  return 2.0 * std::atan2(rel.tail<3>().norm(), std::abs(rel(0)));
}

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& omega) {
  const double th = omega.norm();
  if (th < 1e-12) {
    const Eigen::Matrix3d s = skew(omega);
    return Eigen::Matrix3d::Identity() + s + 0.5 * s * s;
  }
  const Eigen::Matrix3d s = skew(omega / th);
  return Eigen::Matrix3d::Identity() + std::sin(th) * s + (1.0 - std::cos(th)) * s * s;
}

Eigen::Vector3d so3_log(const Eigen::Matrix3d& r) {
  const double tr = r.trace();
  const double c = std::min(1.0, std::max(-1.0, (tr - 1.0) * 0.5));
  const double th = std::acos(c);
  if (th < 1e-9) {
    return unskew(r);  // first-order: R ~ I + S(w)
  }
  if (th > M_PI - 1e-6) {
    // Near pi the off-diagonal formula degenerates; recover the axis from
    // the symmetric part.
    Eigen::Matrix3d b = 0.5 * (r + Eigen::Matrix3d::Identity());
    Eigen::Vector3d axis;
    int k;
    b.diagonal().maxCoeff(&k);
    axis = b.col(k) / std::sqrt(b(k, k));
    axis.normalize();
    Eigen::Vector3d v = unskew(r);
    if (v.dot(axis) < 0.0) axis = -axis;
    return th * axis;
  }
  return th / (2.0 * std::sin(th)) * Eigen::Vector3d(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
}

Eigen::Matrix3d rpy_to_rotation(const Eigen::Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

}  // namespace colift
