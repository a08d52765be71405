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

#include "colift/posture_problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "colift/errors.hpp"
#include "colift/kinematics.hpp"
#include "colift/math_utils.hpp"
#include "colift/rng.hpp"

namespace colift {
namespace {

constexpr double kFdStep = 1e-6;
constexpr double kLimitCap = 1e17;  // larger bounds are treated as absent

Eigen::Matrix3d yaw_rotation(double yaw) {
  return Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

// Shared cost evaluation so the solver objective and evaluate_costs are the
// same arithmetic. `out` optionally receives the per-term breakdown.
double eval_cost(const StaticPostureProblem& p, const Eigen::VectorXd& x,
                 CostBreakdown* out) {
  const ProblemLayout& lay = p.layout;
  const CostWeights& w = p.weights;
  const Eigen::VectorXd& scale = p.weights.torque_scaling;
  double objective = 0.0;
  double wrench_total = 0.0;
  if (out) {
    out->torque_terms.clear();
    out->posture_terms.clear();
    out->continuity_terms.clear();
  }
  for (int k = 0; k < lay.num_heights; ++k) {
    const auto tau = x.segment(lay.torque_offset(k), lay.torque_size());
    const auto f = x.segment(lay.wrench_offset(k), lay.wrench_size());
    const auto s1 = x.segment(lay.human_q_offset(k) + 7, lay.n1);
    const auto s2 = x.segment(lay.robot_q_offset(k) + 7, lay.n2);
    const double t1 = scale.cwiseProduct(tau).squaredNorm();
    const double t2 = (s1 - p.task.human_reference).squaredNorm() +
                      (s2 - p.task.robot_reference).squaredNorm();
    const double reg = f.squaredNorm();
    objective += w.torque_weight * t1 + w.posture_weight * t2 + w.wrench_reg * reg;
    wrench_total += w.wrench_reg * reg;
    if (out) {
      out->torque_terms.push_back(t1);
      out->posture_terms.push_back(t2);
    }
  }
  for (int k = 0; k + 1 < lay.num_heights; ++k) {
    double t3 = 0.0;
    for (int agent = 0; agent < 2; ++agent) {
      const int qa = agent == 0 ? lay.human_q_offset(k) : lay.robot_q_offset(k);
      const int qb = agent == 0 ? lay.human_q_offset(k + 1) : lay.robot_q_offset(k + 1);
      const int nj = agent == 0 ? lay.n1 : lay.n2;
      t3 += (x.segment(qa + 7, nj) - x.segment(qb + 7, nj)).squaredNorm();
      t3 += (x.segment<3>(qa) - x.segment<3>(qb)).squaredNorm();
      const double angle = quaternion_geodesic_angle(
          Eigen::Vector4d(x.segment<4>(qa + 3)), Eigen::Vector4d(x.segment<4>(qb + 3)));
      t3 += angle * angle;
    }
    objective += w.continuity_weight * t3;
    if (out) out->continuity_terms.push_back(t3);
  }
  if (out) {
    out->wrench_reg_term = wrench_total;
    out->objective = objective;
  }
  return objective;
}

// Gradient of the squared geodesic angle w.r.t. the 8 stacked quaternion
// components; finite differences on the (scale-invariant) angle itself. The
// returned direction is also the Gauss-Newton factor.
void geodesic_terms(const Eigen::Vector4d& a, const Eigen::Vector4d& b, double* angle,
                    Eigen::Matrix<double, 8, 1>* dangle) {
  *angle = quaternion_geodesic_angle(a, b);
  dangle->setZero();
  if (*angle < 1e-12) return;
  Eigen::Vector4d ap = a, bp = b;
  for (int i = 0; i < 4; ++i) {
    ap(i) = a(i) + kFdStep;
    const double up = quaternion_geodesic_angle(ap, b);
    ap(i) = a(i) - kFdStep;
    const double dn = quaternion_geodesic_angle(ap, b);
    ap(i) = a(i);
    (*dangle)(i) = (up - dn) / (2.0 * kFdStep);
  }
  for (int i = 0; i < 4; ++i) {
    bp(i) = b(i) + kFdStep;
    const double up = quaternion_geodesic_angle(a, bp);
    bp(i) = b(i) - kFdStep;
    const double dn = quaternion_geodesic_angle(a, bp);
    bp(i) = b(i);
    (*dangle)(4 + i) = (up - dn) / (2.0 * kFdStep);
  }
}

// Solve-local workspace: constant matrices, row offsets, and the height
// bundle used for structured finite differencing. The per-height residual
// rows that depend on the pose variables are evaluated together, so one FD
// sweep per height yields every kinematic/dynamic Jacobian block at once.
struct Assembler {
  const StaticPostureProblem& p;
  ProblemLayout lay;
  int nv;  // composite velocity size = dynamics rows

  std::vector<int> env_ids, grasp_ids;
  std::vector<Eigen::Matrix3d> env_target;
  Eigen::MatrixXd bbar;  // input map, nv x torque_size
  Eigen::MatrixXd h0;    // constant cost Hessian

  // bundle row layout: [dynamics | grasp-pos | grasp-orient | contact-orient
  //                     | contact-z | load-orient | load-z | station...]
  int eq_q_rows = 0;
  int station_rows = 0;
  int per_height_rows = 0;
  int load_z_row = 0;  // within the bundle
  int moment_rows = 0;
  // Wrench slots a 3-DoF grasp pins to zero. The dynamics rows use a masked
  // coupling map that skips them: on the feasible set the residual is the
  // same, but keeping the slot in both the selector row and Q^T would make
  // the load's angular equilibrium linearly dependent on the selector rows
  // whenever the grips sit symmetrically about the load's center.
  std::vector<int> pinned_slots;

  explicit Assembler(const StaticPostureProblem& prob) : p(prob), lay(prob.layout) {
    nv = p.system.layout().velocity_size();
    for (int c = 0; c < static_cast<int>(p.system.contacts.size()); ++c) {
      const ContactSpec& contact = p.system.contacts[c];
      if (contact.kind == ContactKind::kEnvironment) {
        env_ids.push_back(c);
        const double yaw =
            contact.owner == AgentRole::kHuman ? p.task.human_yaw : p.task.robot_yaw;
        env_target.push_back(yaw_rotation(yaw) * p.task.ground_rotation);
      } else {
        grasp_ids.push_back(c);
        if (contact.wrench_dofs == 3) {
          moment_rows += 3;
          for (int m = 0; m < 3; ++m) pinned_slots.push_back(6 * c + 3 + m);
        }
      }
    }
    int orient6 = 0;
    for (int c : grasp_ids) {
      if (p.system.contacts[c].wrench_dofs == 6) orient6 += 3;
    }
    const int ne = static_cast<int>(env_ids.size());
    const int ng = static_cast<int>(grasp_ids.size());
    load_z_row = nv + 3 * ng + orient6 + 3 * ne + ne + 3;
    eq_q_rows = load_z_row + 1;
    station_rows = 2 + 2 * ne;
    const int a1 = static_cast<int>(p.system.human.symmetry_matrix().rows());
    const int a2 = static_cast<int>(p.system.robot.symmetry_matrix().rows());
    per_height_rows = eq_q_rows + moment_rows + 3 + a1 + a2;
    if (lay.num_heights * per_height_rows + (lay.num_heights - 1) * station_rows + 2 !=
        p.num_equalities) {
      throw ContractError("posture problem row registry does not match its assembler");
    }

    const MotorReflection refl = motor_reflected_terms(p.system.robot);
    bbar = Eigen::MatrixXd::Zero(nv, lay.torque_size());
    const CompositeLayout cl = p.system.layout();
    for (int j = 0; j < lay.n2; ++j) bbar(cl.robot_offset() + 6 + j, j) = refl.input_scale(j);
    for (int i = 0; i < lay.n1; ++i) bbar(cl.human_offset() + 6 + i, lay.n2 + i) = 1.0;

    build_constant_hessian();
  }

  void build_constant_hessian() {
    const int n = lay.variable_count();
    const CostWeights& w = p.weights;
    h0 = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < lay.num_heights; ++k) {
      for (int j = 0; j < lay.torque_size(); ++j) {
        const double s = w.torque_scaling(j);
        h0(lay.torque_offset(k) + j, lay.torque_offset(k) + j) += 2.0 * w.torque_weight * s * s;
      }
      for (int j = 0; j < lay.n1; ++j) {
        h0(lay.human_q_offset(k) + 7 + j, lay.human_q_offset(k) + 7 + j) +=
            2.0 * w.posture_weight;
      }
      for (int j = 0; j < lay.n2; ++j) {
        h0(lay.robot_q_offset(k) + 7 + j, lay.robot_q_offset(k) + 7 + j) +=
            2.0 * w.posture_weight;
      }
      for (int j = 0; j < lay.wrench_size(); ++j) {
        h0(lay.wrench_offset(k) + j, lay.wrench_offset(k) + j) += 2.0 * w.wrench_reg;
      }
    }
    auto couple = [&](int ia, int ib) {
      h0(ia, ia) += 2.0 * w.continuity_weight;
      h0(ib, ib) += 2.0 * w.continuity_weight;
      h0(ia, ib) -= 2.0 * w.continuity_weight;
      h0(ib, ia) -= 2.0 * w.continuity_weight;
    };
    for (int k = 0; k + 1 < lay.num_heights; ++k) {
      for (int agent = 0; agent < 2; ++agent) {
        const int qa = agent == 0 ? lay.human_q_offset(k) : lay.robot_q_offset(k);
        const int qb = agent == 0 ? lay.human_q_offset(k + 1) : lay.robot_q_offset(k + 1);
        const int nj = agent == 0 ? lay.n1 : lay.n2;
        for (int c = 0; c < 3; ++c) couple(qa + c, qb + c);
        for (int j = 0; j < nj; ++j) couple(qa + 7 + j, qb + 7 + j);
      }
    }
  }

  void states_at(const Eigen::VectorXd& q, SystemState* sh, SystemState* sr,
                 SystemState* sl) const {
    *sh = SystemState::zero(lay.n1);
    sh->base_position = q.segment<3>(0);
    sh->base_quaternion = q.segment<4>(3);
    sh->joint_positions = q.segment(7, lay.n1);
    *sr = SystemState::zero(lay.n2);
    sr->base_position = q.segment<3>(7 + lay.n1);
    sr->base_quaternion = q.segment<4>(7 + lay.n1 + 3);
    sr->joint_positions = q.segment(7 + lay.n1 + 7, lay.n2);
    *sl = SystemState::zero(0);
    sl->base_position = q.segment<3>(14 + lay.n1 + lay.n2);
    sl->base_quaternion = q.segment<4>(14 + lay.n1 + lay.n2 + 3);
  }

  // Pose-dependent residual rows plus the station coordinates, at fixed
  // wrenches (applied torques enter linearly and are handled analytically).
  Eigen::VectorXd bundle(const Eigen::VectorXd& q, const Eigen::VectorXd& f) const {
    SystemState sh, sr, sl;
    states_at(q, &sh, &sr, &sl);
    const KinematicsCache ch = compute_kinematics(p.system.human, sh);
    const KinematicsCache cr = compute_kinematics(p.system.robot, sr);
    const KinematicsCache cl = compute_kinematics(p.system.load, sl);

    Eigen::VectorXd out(eq_q_rows + station_rows);
    out.head(nv) = composite_gravity_bias(p.system, sh, sr, sl);
    Eigen::VectorXd fm = f;
    for (int slot : pinned_slots) fm(slot) = 0.0;
    out.head(nv).noalias() -= coupling_matrix(p.system, sh, sr, sl).transpose() * fm;

    auto owner_pose = [&](const ContactSpec& c) {
      const bool human = c.owner == AgentRole::kHuman;
      const ResolvedModel& m = human ? p.system.human : p.system.robot;
      const KinematicsCache& cache = human ? ch : cr;
      return frame_pose(m, cache, m.frame_index(c.frame));
    };

    int r = nv;
    std::vector<Pose> grasp_owner, grasp_load;
    for (int c : grasp_ids) {
      const ContactSpec& contact = p.system.contacts[c];
      grasp_owner.push_back(owner_pose(contact));
      grasp_load.push_back(frame_pose(p.system.load, cl,
                                      p.system.load.frame_index(contact.paired_load_frame)));
      out.segment<3>(r) = grasp_owner.back().position - grasp_load.back().position;
      r += 3;
    }
    for (std::size_t g = 0; g < grasp_ids.size(); ++g) {
      if (p.system.contacts[grasp_ids[g]].wrench_dofs != 6) continue;
      out.segment<3>(r) =
          so3_log(grasp_owner[g].rotation.transpose() * grasp_load[g].rotation);
      r += 3;
    }
    std::vector<Pose> env_pose;
    for (std::size_t e = 0; e < env_ids.size(); ++e) {
      env_pose.push_back(owner_pose(p.system.contacts[env_ids[e]]));
      out.segment<3>(r) = so3_log(env_pose.back().rotation.transpose() * env_target[e]);
      r += 3;
    }
    for (const Pose& pe : env_pose) out(r++) = pe.position.z();
    const Eigen::Matrix3d r_load = cl.link_pose[p.system.load.base_link()].rotation;
    out.segment<3>(r) = so3_log(r_load.transpose() * p.task.load_rotation);
    r += 3;
    out(r++) = sl.base_position.z();  // the height target is subtracted later

    out(r++) = sl.base_position.x();
    out(r++) = sl.base_position.y();
    for (const Pose& pe : env_pose) {
      out(r++) = pe.position.x();
      out(r++) = pe.position.y();
    }
    return out;
  }

  Eigen::VectorXd equalities(const Eigen::VectorXd& x) const {
    Eigen::VectorXd res(p.num_equalities);
    std::vector<Eigen::VectorXd> stations(lay.num_heights);
    for (int k = 0; k < lay.num_heights; ++k) {
      const Eigen::VectorXd q = x.segment(lay.height_offset(k), lay.pose_size());
      const Eigen::VectorXd tau = x.segment(lay.torque_offset(k), lay.torque_size());
      const Eigen::VectorXd f = x.segment(lay.wrench_offset(k), lay.wrench_size());
      const Eigen::VectorXd bun = bundle(q, f);
      int off = k * per_height_rows;
      res.segment(off, nv) = bun.head(nv) - bbar * tau;
      res.segment(off + nv, eq_q_rows - nv) = bun.segment(nv, eq_q_rows - nv);
      res(off + load_z_row) -= p.task.load_heights[k];
      int r = off + eq_q_rows;
      for (int c : grasp_ids) {
        if (p.system.contacts[c].wrench_dofs != 3) continue;
        res.segment<3>(r) = f.segment<3>(6 * c + 3);
        r += 3;
      }
      res(r++) = q.segment<4>(3).squaredNorm() - 1.0;
      res(r++) = q.segment<4>(7 + lay.n1 + 3).squaredNorm() - 1.0;
      res(r++) = q.segment<4>(14 + lay.n1 + lay.n2 + 3).squaredNorm() - 1.0;
      const Eigen::MatrixXd a1 = p.system.human.symmetry_matrix();
      const Eigen::MatrixXd a2 = p.system.robot.symmetry_matrix();
      if (a1.rows() > 0) {
        res.segment(r, a1.rows()) = a1 * q.segment(7, lay.n1);
        r += static_cast<int>(a1.rows());
      }
      if (a2.rows() > 0) {
        res.segment(r, a2.rows()) = a2 * q.segment(7 + lay.n1 + 7, lay.n2);
        r += static_cast<int>(a2.rows());
      }
      stations[k] = bun.tail(station_rows);
    }
    int r = lay.num_heights * per_height_rows;
    for (int k = 0; k + 1 < lay.num_heights; ++k) {
      res.segment(r, station_rows) = stations[k] - stations[k + 1];
      r += station_rows;
    }
    res.segment<2>(r) = stations[0].head<2>() - p.task.load_xy;
    return res;
  }

  Eigen::MatrixXd equalities_jacobian(const Eigen::VectorXd& x) const {
    const int n = lay.variable_count();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(p.num_equalities, n);
    std::vector<Eigen::MatrixXd> station_grad(lay.num_heights);
    for (int k = 0; k < lay.num_heights; ++k) {
      Eigen::VectorXd q = x.segment(lay.height_offset(k), lay.pose_size());
      const Eigen::VectorXd f = x.segment(lay.wrench_offset(k), lay.wrench_size());
      const int off = k * per_height_rows;
      const int qcol = lay.height_offset(k);

      Eigen::MatrixXd jb(eq_q_rows + station_rows, lay.pose_size());
      for (int j = 0; j < lay.pose_size(); ++j) {
        const double saved = q(j);
        q(j) = saved + kFdStep;
        const Eigen::VectorXd up = bundle(q, f);
        q(j) = saved - kFdStep;
        const Eigen::VectorXd dn = bundle(q, f);
        q(j) = saved;
        jb.col(j) = (up - dn) / (2.0 * kFdStep);
      }
      jac.block(off, qcol, eq_q_rows, lay.pose_size()) = jb.topRows(eq_q_rows);
      station_grad[k] = jb.bottomRows(station_rows);

      jac.block(off, lay.torque_offset(k), nv, lay.torque_size()) = -bbar;
      SystemState sh, sr, sl;
      states_at(q, &sh, &sr, &sl);
      Eigen::MatrixXd qmat = coupling_matrix(p.system, sh, sr, sl);
      for (int slot : pinned_slots) qmat.row(slot).setZero();
      jac.block(off, lay.wrench_offset(k), nv, lay.wrench_size()) = -qmat.transpose();

      int r = off + eq_q_rows;
      for (int c : grasp_ids) {
        if (p.system.contacts[c].wrench_dofs != 3) continue;
        for (int m = 0; m < 3; ++m) jac(r + m, lay.wrench_offset(k) + 6 * c + 3 + m) = 1.0;
        r += 3;
      }
      const int quat_offsets[3] = {3, 7 + lay.n1 + 3, 14 + lay.n1 + lay.n2 + 3};
      for (int body = 0; body < 3; ++body) {
        for (int m = 0; m < 4; ++m) {
          jac(r, qcol + quat_offsets[body] + m) = 2.0 * x(qcol + quat_offsets[body] + m);
        }
        ++r;
      }
      const Eigen::MatrixXd a1 = p.system.human.symmetry_matrix();
      const Eigen::MatrixXd a2 = p.system.robot.symmetry_matrix();
      if (a1.rows() > 0) {
        jac.block(r, qcol + 7, a1.rows(), lay.n1) = a1;
        r += static_cast<int>(a1.rows());
      }
      if (a2.rows() > 0) {
        jac.block(r, qcol + 7 + lay.n1 + 7, a2.rows(), lay.n2) = a2;
        r += static_cast<int>(a2.rows());
      }
    }
    int r = lay.num_heights * per_height_rows;
    for (int k = 0; k + 1 < lay.num_heights; ++k) {
      jac.block(r, lay.height_offset(k), station_rows, lay.pose_size()) = station_grad[k];
      jac.block(r, lay.height_offset(k + 1), station_rows, lay.pose_size()) =
          -station_grad[k + 1];
      r += station_rows;
    }
    jac.block(r, lay.height_offset(0), 2, lay.pose_size()) = station_grad[0].topRows(2);
    return jac;
  }

  double objective(const Eigen::VectorXd& x) const { return eval_cost(p, x, nullptr); }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    const CostWeights& w = p.weights;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(lay.variable_count());
    for (int k = 0; k < lay.num_heights; ++k) {
      const auto tau = x.segment(lay.torque_offset(k), lay.torque_size());
      g.segment(lay.torque_offset(k), lay.torque_size()) =
          2.0 * w.torque_weight *
          w.torque_scaling.array().square().matrix().cwiseProduct(tau);
      g.segment(lay.human_q_offset(k) + 7, lay.n1) =
          2.0 * w.posture_weight *
          (x.segment(lay.human_q_offset(k) + 7, lay.n1) - p.task.human_reference);
      g.segment(lay.robot_q_offset(k) + 7, lay.n2) =
          2.0 * w.posture_weight *
          (x.segment(lay.robot_q_offset(k) + 7, lay.n2) - p.task.robot_reference);
      g.segment(lay.wrench_offset(k), lay.wrench_size()) =
          2.0 * w.wrench_reg * x.segment(lay.wrench_offset(k), lay.wrench_size());
    }
    for (int k = 0; k + 1 < lay.num_heights; ++k) {
      for (int agent = 0; agent < 2; ++agent) {
        const int qa = agent == 0 ? lay.human_q_offset(k) : lay.robot_q_offset(k);
        const int qb = agent == 0 ? lay.human_q_offset(k + 1) : lay.robot_q_offset(k + 1);
        const int nj = agent == 0 ? lay.n1 : lay.n2;
        Eigen::VectorXd d = 2.0 * w.continuity_weight *
                            (x.segment(qa + 7, nj) - x.segment(qb + 7, nj));
        g.segment(qa + 7, nj) += d;
        g.segment(qb + 7, nj) -= d;
        Eigen::Vector3d dp = 2.0 * w.continuity_weight *
                             (x.segment<3>(qa) - x.segment<3>(qb));
        g.segment<3>(qa) += dp;
        g.segment<3>(qb) -= dp;
        double angle;
        Eigen::Matrix<double, 8, 1> dangle;
        geodesic_terms(Eigen::Vector4d(x.segment<4>(qa + 3)),
                       Eigen::Vector4d(x.segment<4>(qb + 3)), &angle, &dangle);
        g.segment<4>(qa + 3) += 2.0 * w.continuity_weight * angle * dangle.head<4>();
        g.segment<4>(qb + 3) += 2.0 * w.continuity_weight * angle * dangle.tail<4>();
      }
    }
    return g;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd h = h0;
    for (int k = 0; k + 1 < lay.num_heights; ++k) {
      for (int agent = 0; agent < 2; ++agent) {
        const int qa = agent == 0 ? lay.human_q_offset(k) : lay.robot_q_offset(k);
        const int qb = agent == 0 ? lay.human_q_offset(k + 1) : lay.robot_q_offset(k + 1);
        double angle;
        Eigen::Matrix<double, 8, 1> dangle;
        geodesic_terms(Eigen::Vector4d(x.segment<4>(qa + 3)),
                       Eigen::Vector4d(x.segment<4>(qb + 3)), &angle, &dangle);
        if (angle < 1e-12) continue;
        int idx[8];
        for (int i = 0; i < 4; ++i) idx[i] = qa + 3 + i;
        for (int i = 0; i < 4; ++i) idx[4 + i] = qb + 3 + i;
        for (int i = 0; i < 8; ++i) {
          for (int j = 0; j < 8; ++j) {
            h(idx[i], idx[j]) += 2.0 * p.weights.continuity_weight * dangle(i) * dangle(j);
          }
        }
      }
    }
    return h;
  }
};

double coarse_reach_bound(const ResolvedComposite& system) {
  double bound = 0.5;  // slack for the base link's own extent
  for (const ResolvedModel* m : {&system.human, &system.robot, &system.load}) {
    for (int j = 0; j < m->num_joints(); ++j) bound += m->joint(j).origin.position.norm();
    for (int i = 0; i < m->num_frames(); ++i) bound += m->frame(i).local.position.norm();
  }
  return bound;
}

}  // namespace

StaticPostureProblem build_problem(const CompositeSystem& system,
                                   const HardwareParams& robot_params, const TaskSpec& task,
                                   const CostWeights& weights) {
  const DiagnosticList diags = system.validate();
  if (!diags.empty()) {
    std::string msg = "composite system invalid:";
    for (const auto& d : diags) msg += " [" + d.code + "] " + d.message;
    throw ModelError(msg);
  }
  if (task.load_heights.empty()) throw ModelError("task needs at least one load height");
  for (std::size_t k = 0; k + 1 < task.load_heights.size(); ++k) {
    if (task.load_heights[k] >= task.load_heights[k + 1]) {
      throw ModelError("load heights must be strictly increasing");
    }
  }

  StaticPostureProblem p;
  p.system = resolve_composite(system, robot_params);
  p.task = task;
  p.weights = weights;

  const CompositeLayout cl = p.system.layout();
  if (task.human_reference.size() != cl.n1 || task.robot_reference.size() != cl.n2) {
    throw ModelError("reference postures must match the agents' joint counts");
  }
  const double reach = coarse_reach_bound(p.system);
  if (task.load_heights.back() > reach) {
    throw ModelError("load height exceeds the combined link-length reach bound");
  }

  if (weights.torque_scaling.size() == 0) {
    const MotorReflection refl = motor_reflected_terms(p.system.robot);
    p.weights.torque_scaling.resize(cl.torque_size());
    p.weights.torque_scaling.head(cl.n2) = refl.input_scale;
    p.weights.torque_scaling.tail(cl.n1).setOnes();
  } else if (weights.torque_scaling.size() != cl.torque_size()) {
    throw ModelError("torque scaling must have one entry per stacked torque");
  }

  p.friction = build_friction_model(system.contacts, task.ground_rotation);

  ProblemLayout& lay = p.layout;
  lay.n1 = cl.n1;
  lay.n2 = cl.n2;
  lay.num_contacts = cl.num_contacts;
  lay.num_heights = static_cast<int>(task.load_heights.size());
  int num_env = 0, num_grasp = 0, orient6 = 0, moment3 = 0;
  for (const auto& c : system.contacts) {
    if (c.kind == ContactKind::kEnvironment) {
      ++num_env;
    } else {
      ++num_grasp;
      if (c.wrench_dofs == 6) {
        orient6 += 3;
      } else {
        moment3 += 3;
      }
    }
  }
  lay.num_env = num_env;

  const int a1 = static_cast<int>(p.system.human.symmetry_matrix().rows());
  const int a2 = static_cast<int>(p.system.robot.symmetry_matrix().rows());
  const int nv = cl.velocity_size();
  int offset = 0;
  auto block = [&](const std::string& family, int height, int rows) {
    if (rows > 0) p.equality_blocks.push_back({family, height, offset, rows});
    offset += rows;
  };
  for (int k = 0; k < lay.num_heights; ++k) {
    block("dynamics", k, nv);
    block("grasp-position", k, 3 * num_grasp);
    block("grasp-orientation", k, orient6);
    block("contact-orientation", k, 3 * num_env);
    block("contact-height", k, num_env);
    block("load-orientation", k, 3);
    block("load-height", k, 1);
    block("grasp-moment", k, moment3);
    block("quaternion-norm", k, 3);
    block("symmetry", k, a1 + a2);
  }
  for (int k = 0; k + 1 < lay.num_heights; ++k) {
    block("station", -1, 2 + 2 * num_env);
  }
  block("load-anchor", 0, 2);
  p.num_equalities = offset;

  // Constant linear inequalities. Torque entries are stored motor-side for
  // the robot, so its joint-side limits divide through the transmission map.
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> bounds;
  const int n = lay.variable_count();
  auto push = [&](int col, double coeff, double bound) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    row(col) = coeff;
    rows.push_back(row);
    bounds.push_back(bound);
  };
  const MotorReflection refl = motor_reflected_terms(p.system.robot);
  for (int k = 0; k < lay.num_heights; ++k) {
    for (int j = 0; j < lay.n1; ++j) {
      const auto& joint = p.system.human.joint(j);
      if (joint.pos_max < kLimitCap) push(lay.human_q_offset(k) + 7 + j, 1.0, joint.pos_max);
      if (joint.pos_min > -kLimitCap) push(lay.human_q_offset(k) + 7 + j, -1.0, -joint.pos_min);
    }
    for (int j = 0; j < lay.n2; ++j) {
      const auto& joint = p.system.robot.joint(j);
      if (joint.pos_max < kLimitCap) push(lay.robot_q_offset(k) + 7 + j, 1.0, joint.pos_max);
      if (joint.pos_min > -kLimitCap) push(lay.robot_q_offset(k) + 7 + j, -1.0, -joint.pos_min);
    }
    for (int j = 0; j < lay.n2; ++j) {
      const auto& joint = p.system.robot.joint(j);
      push(lay.torque_offset(k) + j, refl.input_scale(j), joint.joint_torque_max);
      push(lay.torque_offset(k) + j, -refl.input_scale(j), -joint.joint_torque_min);
    }
    for (int j = 0; j < lay.n1; ++j) {
      const auto& joint = p.system.human.joint(j);
      if (joint.joint_torque_max < kLimitCap) {
        push(lay.torque_offset(k) + lay.n2 + j, 1.0, joint.joint_torque_max);
      }
      if (joint.joint_torque_min > -kLimitCap) {
        push(lay.torque_offset(k) + lay.n2 + j, -1.0, -joint.joint_torque_min);
      }
    }
  }
  const int friction_rows = static_cast<int>(p.friction.C.rows());
  const int base = static_cast<int>(rows.size());
  p.ineq_matrix = Eigen::MatrixXd::Zero(base + lay.num_heights * friction_rows, n);
  p.ineq_bound.resize(base + lay.num_heights * friction_rows);
  for (int i = 0; i < base; ++i) {
    p.ineq_matrix.row(i) = rows[i];
    p.ineq_bound(i) = bounds[i];
  }
  for (int k = 0; k < lay.num_heights; ++k) {
    p.ineq_matrix.block(base + k * friction_rows, lay.wrench_offset(k), friction_rows,
                        lay.wrench_size()) = p.friction.C;
    p.ineq_bound.segment(base + k * friction_rows, friction_rows) =
        p.friction.b.array() - p.friction.margin;
  }
  return p;
}

Eigen::VectorXd pack_variables(const StaticPostureProblem& problem,
                               const std::vector<HeightPosture>& heights) {
  const ProblemLayout& lay = problem.layout;
  if (static_cast<int>(heights.size()) != lay.num_heights) {
    throw ContractError("height count mismatch in pack_variables");
  }
  Eigen::VectorXd x(lay.variable_count());
  for (int k = 0; k < lay.num_heights; ++k) {
    const HeightPosture& hp = heights[k];
    hp.human.check_dims(lay.n1);
    hp.robot.check_dims(lay.n2);
    hp.load.check_dims(0);
    x.segment<3>(lay.human_q_offset(k)) = hp.human.base_position;
    x.segment<4>(lay.human_q_offset(k) + 3) = hp.human.base_quaternion;
    x.segment(lay.human_q_offset(k) + 7, lay.n1) = hp.human.joint_positions;
    x.segment<3>(lay.robot_q_offset(k)) = hp.robot.base_position;
    x.segment<4>(lay.robot_q_offset(k) + 3) = hp.robot.base_quaternion;
    x.segment(lay.robot_q_offset(k) + 7, lay.n2) = hp.robot.joint_positions;
    x.segment<3>(lay.load_q_offset(k)) = hp.load.base_position;
    x.segment<4>(lay.load_q_offset(k) + 3) = hp.load.base_quaternion;
    x.segment(lay.torque_offset(k), lay.torque_size()) = hp.torques;
    x.segment(lay.wrench_offset(k), lay.wrench_size()) = hp.wrenches;
  }
  return x;
}

std::vector<HeightPosture> unpack_variables(const StaticPostureProblem& problem,
                                            const Eigen::VectorXd& x) {
  const ProblemLayout& lay = problem.layout;
  if (x.size() != lay.variable_count()) {
    throw ContractError("variable vector does not match the problem layout");
  }
  std::vector<HeightPosture> heights(lay.num_heights);
  for (int k = 0; k < lay.num_heights; ++k) {
    HeightPosture& hp = heights[k];
    hp.human = SystemState::zero(lay.n1);
    hp.human.base_position = x.segment<3>(lay.human_q_offset(k));
    hp.human.base_quaternion = x.segment<4>(lay.human_q_offset(k) + 3);
    hp.human.joint_positions = x.segment(lay.human_q_offset(k) + 7, lay.n1);
    hp.robot = SystemState::zero(lay.n2);
    hp.robot.base_position = x.segment<3>(lay.robot_q_offset(k));
    hp.robot.base_quaternion = x.segment<4>(lay.robot_q_offset(k) + 3);
    hp.robot.joint_positions = x.segment(lay.robot_q_offset(k) + 7, lay.n2);
    hp.load = SystemState::zero(0);
    hp.load.base_position = x.segment<3>(lay.load_q_offset(k));
    hp.load.base_quaternion = x.segment<4>(lay.load_q_offset(k) + 3);
    hp.torques = x.segment(lay.torque_offset(k), lay.torque_size());
    hp.wrenches = x.segment(lay.wrench_offset(k), lay.wrench_size());
  }
  return heights;
}

namespace {

Eigen::VectorXd initial_vector(const StaticPostureProblem& p, const PostureInit& init,
                               int attempt, std::uint64_t seed) {
  const ProblemLayout& lay = p.layout;
  std::vector<HeightPosture> heights(lay.num_heights);

  // Rough load sharing for the wrench guess: grasps carry the load weight,
  // each environment contact carries its owner plus the owner's load share.
  const double gz = -p.system.gravity.z();
  const double load_weight = p.system.load.total_mass() * gz;
  int total_grasps = 0;
  int env_count[2] = {0, 0}, grasp_count[2] = {0, 0};
  for (const auto& c : p.system.contacts) {
    const int o = c.owner == AgentRole::kHuman ? 0 : 1;
    if (c.kind == ContactKind::kGrasp) {
      ++grasp_count[o];
      ++total_grasps;
    } else {
      ++env_count[o];
    }
  }

  for (int k = 0; k < lay.num_heights; ++k) {
    HeightPosture& hp = heights[k];
    hp.human = init.human;
    hp.robot = init.robot;
    hp.load = init.load;
    hp.load.base_position.z() = p.task.load_heights[k];
    hp.torques = Eigen::VectorXd::Zero(lay.torque_size());
    hp.wrenches = Eigen::VectorXd::Zero(lay.wrench_size());
    for (int c = 0; c < lay.num_contacts; ++c) {
      const ContactSpec& contact = p.system.contacts[c];
      const int o = contact.owner == AgentRole::kHuman ? 0 : 1;
      if (contact.kind == ContactKind::kGrasp) {
        if (total_grasps > 0) hp.wrenches(6 * c + 2) = -load_weight / total_grasps;
      } else if (env_count[o] > 0) {
        const double owner_weight =
            (o == 0 ? p.system.human : p.system.robot).total_mass() * gz;
        const double share =
            total_grasps > 0 ? load_weight * grasp_count[o] / total_grasps : 0.0;
        hp.wrenches(6 * c + 2) = (owner_weight + share) / env_count[o];
      }
    }
  }

  Eigen::VectorXd x = pack_variables(p, heights);
  if (attempt > 0) {
    Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(attempt), 0x706f7374));
    const double scale = 0.05 * attempt;
    for (int k = 0; k < lay.num_heights; ++k) {
      for (int j = 0; j < lay.n1; ++j) {
        x(lay.human_q_offset(k) + 7 + j) += rng.uniform(-scale, scale);
      }
      for (int j = 0; j < lay.n2; ++j) {
        x(lay.robot_q_offset(k) + 7 + j) += rng.uniform(-scale, scale);
      }
      for (int c = 0; c < 2; ++c) {
        x(lay.human_q_offset(k) + c) += rng.uniform(-scale, scale);
        x(lay.robot_q_offset(k) + c) += rng.uniform(-scale, scale);
      }
    }
  }
  return x;
}

}  // namespace

PostureSolution solve_posture(const StaticPostureProblem& problem, const PostureInit& init,
                              const PostureSolverOptions& options) {
  Assembler assembler(problem);

  NlpFunctions fns;
  fns.objective = [&](const Eigen::VectorXd& x) { return assembler.objective(x); };
  fns.objective_gradient = [&](const Eigen::VectorXd& x) { return assembler.gradient(x); };
  fns.objective_hessian = [&](const Eigen::VectorXd& x) { return assembler.hessian(x); };
  fns.equalities = [&](const Eigen::VectorXd& x) { return assembler.equalities(x); };
  fns.equalities_jacobian = [&](const Eigen::VectorXd& x) {
    return assembler.equalities_jacobian(x);
  };
  fns.ineq_matrix = problem.ineq_matrix;
  fns.ineq_bound = problem.ineq_bound;

  IpmOptions iopt;
  iopt.tol_feas = options.tol_feas;
  iopt.tol_stat = options.tol_stat;
  iopt.max_iterations = options.max_iterations;
  iopt.verbose = std::getenv("COLIFT_IPM_VERBOSE") != nullptr;

  PostureSolution best;
  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    const Eigen::VectorXd x0 = initial_vector(problem, init, attempt, options.seed);
    const IpmResult res = solve_nlp(fns, x0, iopt);

    PostureSolution sol;
    sol.status = res.status;
    sol.heights = unpack_variables(problem, res.x);
    sol.objective = res.objective;
    sol.max_violation = res.max_violation;
    sol.iterations = res.iterations;
    sol.restarts_used = attempt;
    sol.variables = res.x;
    if (sol.status == SolveStatus::kSolved) return sol;
    if (sol.max_violation < best.max_violation || best.variables.size() == 0) best = sol;
  }
  return best;
}

Eigen::VectorXd equality_residuals(const StaticPostureProblem& problem,
                                   const Eigen::VectorXd& x) {
  return Assembler(problem).equalities(x);
}

Eigen::MatrixXd equality_jacobian(const StaticPostureProblem& problem,
                                  const Eigen::VectorXd& x) {
  return Assembler(problem).equalities_jacobian(x);
}

CostBreakdown evaluate_costs(const StaticPostureProblem& problem,
                             const PostureSolution& solution) {
  if (solution.status != SolveStatus::kSolved) {
    throw ContractError("cost breakdown requires a solved posture");
  }
  CostBreakdown breakdown;
  eval_cost(problem, pack_variables(problem, solution.heights), &breakdown);
  return breakdown;
}

ConstraintReport verify_solution(const StaticPostureProblem& problem,
                                 const PostureSolution& solution) {
  const ProblemLayout& lay = problem.layout;
  const ResolvedComposite& sys = problem.system;
  double dyn = 0, grasp_pos = 0, grasp_orient = 0, grasp_moment = 0;
  double contact_orient = 0, contact_z = 0, load_orient = 0, load_z = 0;
  double quat_norm = 0, symmetry = 0, station = 0, anchor = 0;
  double joint_limit = 0, torque_limit = 0, friction = 0;

  const MotorReflection refl = motor_reflected_terms(sys.robot);
  Eigen::VectorXd prev_station;
  for (int k = 0; k < lay.num_heights; ++k) {
    const HeightPosture& hp = solution.heights[k];
    const Eigen::VectorXd resid = composite_static_residual(sys, hp.human, hp.robot,
                                                            hp.load, hp.torques, hp.wrenches);
    dyn = std::max(dyn, resid.cwiseAbs().maxCoeff());

    const KinematicsCache ch = compute_kinematics(sys.human, hp.human);
    const KinematicsCache cr = compute_kinematics(sys.robot, hp.robot);
    const KinematicsCache cl = compute_kinematics(sys.load, hp.load);
    auto owner_pose = [&](const ContactSpec& c) {
      const bool human = c.owner == AgentRole::kHuman;
      const ResolvedModel& m = human ? sys.human : sys.robot;
      return frame_pose(m, human ? ch : cr, m.frame_index(c.frame));
    };

    Eigen::VectorXd cur_station(2 + 2 * lay.num_env);
    cur_station(0) = hp.load.base_position.x();
    cur_station(1) = hp.load.base_position.y();
    int st = 2;
    for (int c = 0; c < lay.num_contacts; ++c) {
      const ContactSpec& contact = sys.contacts[c];
      const Pose po = owner_pose(contact);
      if (contact.kind == ContactKind::kGrasp) {
        const Pose pl = frame_pose(sys.load, cl, sys.load.frame_index(contact.paired_load_frame));
        grasp_pos = std::max(grasp_pos, (po.position - pl.position).cwiseAbs().maxCoeff());
        if (contact.wrench_dofs == 6) {
          grasp_orient = std::max(
              grasp_orient,
              so3_log(po.rotation.transpose() * pl.rotation).cwiseAbs().maxCoeff());
        } else {
          grasp_moment = std::max(
              grasp_moment, hp.wrenches.segment<3>(6 * c + 3).cwiseAbs().maxCoeff());
        }
      } else {
        const double yaw = contact.owner == AgentRole::kHuman ? problem.task.human_yaw
                                                              : problem.task.robot_yaw;
        const Eigen::Matrix3d target = yaw_rotation(yaw) * problem.task.ground_rotation;
        contact_orient = std::max(
            contact_orient, so3_log(po.rotation.transpose() * target).cwiseAbs().maxCoeff());
        contact_z = std::max(contact_z, std::abs(po.position.z()));
        cur_station(st++) = po.position.x();
        cur_station(st++) = po.position.y();
      }
    }
    const Eigen::Matrix3d r_load = cl.link_pose[sys.load.base_link()].rotation;
    load_orient = std::max(
        load_orient,
        so3_log(r_load.transpose() * problem.task.load_rotation).cwiseAbs().maxCoeff());
    load_z = std::max(load_z,
                      std::abs(hp.load.base_position.z() - problem.task.load_heights[k]));
    if (k == 0) {
      anchor = (hp.load.base_position.head<2>() - problem.task.load_xy).cwiseAbs().maxCoeff();
    }
    quat_norm = std::max(quat_norm, std::abs(hp.human.base_quaternion.squaredNorm() - 1.0));
    quat_norm = std::max(quat_norm, std::abs(hp.robot.base_quaternion.squaredNorm() - 1.0));
    quat_norm = std::max(quat_norm, std::abs(hp.load.base_quaternion.squaredNorm() - 1.0));
    const Eigen::MatrixXd a1 = sys.human.symmetry_matrix();
    const Eigen::MatrixXd a2 = sys.robot.symmetry_matrix();
    if (a1.rows() > 0) {
      symmetry = std::max(symmetry, (a1 * hp.human.joint_positions).cwiseAbs().maxCoeff());
    }
    if (a2.rows() > 0) {
      symmetry = std::max(symmetry, (a2 * hp.robot.joint_positions).cwiseAbs().maxCoeff());
    }
    if (k > 0) {
      station = std::max(station, (cur_station - prev_station).cwiseAbs().maxCoeff());
    }
    prev_station = cur_station;

    for (int j = 0; j < lay.n1; ++j) {
      const auto& joint = sys.human.joint(j);
      const double s = hp.human.joint_positions(j);
      joint_limit = std::max({joint_limit, s - joint.pos_max, joint.pos_min - s, 0.0});
      const double t = hp.torques(lay.n2 + j);
      if (joint.joint_torque_max < kLimitCap) {
        torque_limit = std::max(torque_limit, t - joint.joint_torque_max);
      }
      if (joint.joint_torque_min > -kLimitCap) {
        torque_limit = std::max(torque_limit, joint.joint_torque_min - t);
      }
    }
    for (int j = 0; j < lay.n2; ++j) {
      const auto& joint = sys.robot.joint(j);
      const double s = hp.robot.joint_positions(j);
      joint_limit = std::max({joint_limit, s - joint.pos_max, joint.pos_min - s, 0.0});
      const double jt = refl.input_scale(j) * hp.torques(j);
      torque_limit = std::max({torque_limit, jt - joint.joint_torque_max,
                               joint.joint_torque_min - jt});
    }
    torque_limit = std::max(torque_limit, 0.0);
    if (problem.friction.C.rows() > 0) {
      friction = std::max(
          friction,
          std::max(0.0, (problem.friction.C * hp.wrenches - problem.friction.b).maxCoeff()));
    }
  }

  ConstraintReport report;
  report.families = {{"dynamics", dyn},
                     {"grasp-position", grasp_pos},
                     {"grasp-orientation", grasp_orient},
                     {"grasp-moment", grasp_moment},
                     {"contact-orientation", contact_orient},
                     {"contact-height", contact_z},
                     {"load-orientation", load_orient},
                     {"load-height", load_z},
                     {"quaternion-norm", quat_norm},
                     {"symmetry", symmetry},
                     {"station", station},
                     {"load-anchor", anchor},
                     {"joint-limits", joint_limit},
                     {"torque-limits", torque_limit},
                     {"friction", friction}};
  report.max_violation = 0.0;
  for (const auto& f : report.families) {
    report.max_violation = std::max(report.max_violation, f.worst);
  }
  return report;
}

}  // namespace colift
