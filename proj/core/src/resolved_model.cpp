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

#include "colift/resolved_model.hpp"

#include <algorithm>
#include <map>

#include "colift/errors.hpp"
#include "colift/shapes.hpp"

namespace colift {

int ResolvedModel::frame_index(const std::string& frame_name) const {
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (frames_[i].name == frame_name) return static_cast<int>(i);
  }
  throw ModelError("unknown frame: " + frame_name);
}

bool ResolvedModel::has_frame(const std::string& frame_name) const {
  for (const auto& f : frames_) {
    if (f.name == frame_name) return true;
  }
  return false;
}

int ResolvedModel::joint_index(const std::string& joint_name) const {
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    if (joints_[i].name == joint_name) return static_cast<int>(i);
  }
  throw ModelError("unknown joint: " + joint_name);
}

double ResolvedModel::total_mass() const {
  double m = 0.0;
  for (const auto& l : links_) m += l.body.mass;
  return m;
}

Eigen::VectorXd ResolvedModel::joint_lower_limits() const {
  Eigen::VectorXd lo(num_joints());
  for (int i = 0; i < num_joints(); ++i) lo(i) = joints_[i].pos_min;
  return lo;
}

Eigen::VectorXd ResolvedModel::joint_upper_limits() const {
  Eigen::VectorXd hi(num_joints());
  for (int i = 0; i < num_joints(); ++i) hi(i) = joints_[i].pos_max;
  return hi;
}

ResolvedModel resolve(const KinematicModel& model, const HardwareParams& params) {
  if (params.length_multipliers.size() != static_cast<int>(model.groups.lengths.size()) ||
      params.densities.size() != static_cast<int>(model.groups.densities.size()) ||
      params.motor_ids.size() != model.groups.motors.size()) {
    throw ModelError("hardware parameter dimensions do not match the model's parameter groups");
  }

  // Per-link values: group entries override the nominals.
  std::vector<double> lm(model.num_links());
  std::vector<double> rho(model.num_links());
  for (int i = 0; i < model.num_links(); ++i) {
    lm[i] = model.links[i].length_multiplier;
    rho[i] = model.links[i].density;
  }
  for (std::size_t g = 0; g < model.groups.lengths.size(); ++g) {
    for (const auto& name : model.groups.lengths[g]) {
      lm[model.link_index(name)] = params.length_multipliers(static_cast<int>(g));
    }
  }
  for (std::size_t g = 0; g < model.groups.densities.size(); ++g) {
    for (const auto& name : model.groups.densities[g]) {
      rho[model.link_index(name)] = params.densities(static_cast<int>(g));
    }
  }
  std::map<std::string, std::string> bindings = model.motor_bindings;
  for (std::size_t g = 0; g < model.groups.motors.size(); ++g) {
    (void)model.motor_index(params.motor_ids[g]);  // throws on unknown id
    for (const auto& joint : model.groups.motors[g]) bindings[joint] = params.motor_ids[g];
  }

  ResolvedModel out;
  out.name_ = model.name;
  out.actuation_ = model.actuation;
  out.base_link_ = model.link_index(model.base_link);

  out.links_.resize(model.num_links());
  for (int i = 0; i < model.num_links(); ++i) {
    auto& l = out.links_[i];
    l.name = model.links[i].name;
    l.body = link_inertia(model.links[i].shape, rho[i], lm[i]);
    l.parent_joint = -1;
    l.parent_link = -1;
  }

  out.joints_.resize(model.num_joints());
  for (int j = 0; j < model.num_joints(); ++j) {
    const auto& spec = model.joints[j];
    auto& joint = out.joints_[j];
    joint.name = spec.name;
    joint.kind = spec.kind;
    joint.parent_link = model.link_index(spec.parent_link);
    joint.child_link = model.link_index(spec.child_link);
    // The joint attachment rides the parent's geometry: its offset component
    // along the parent's growth axis stretches with the parent's multiplier.
    Eigen::Vector3d xyz = spec.origin_xyz;
    const int axis = model.links[joint.parent_link].shape.growth_axis;
    xyz(axis) *= lm[joint.parent_link];
    joint.origin = Pose(rpy_to_rotation(spec.origin_rpy), xyz);
    const double axis_norm = spec.axis.norm();
    if (axis_norm < 1e-12) throw ModelError("joint " + spec.name + ": zero axis");
    joint.axis = spec.axis / axis_norm;
    joint.pos_min = spec.pos_min;
    joint.pos_max = spec.pos_max;
    joint.joint_torque_min = spec.torque_min;
    joint.joint_torque_max = spec.torque_max;
    if (model.actuation == ActuationKind::kMotor) {
      auto it = bindings.find(spec.name);
      if (it == bindings.end()) {
        throw ModelError("actuated joint " + spec.name + " has no motor binding");
      }
      const MotorSpec& motor = model.motor_catalog[model.motor_index(it->second)];
      joint.inv_gear_ratio = motor.inv_gear_ratio;
      joint.rotor_inertia = motor.rotor_inertia;
      joint.joint_torque_min = motor.torque_min;
      joint.joint_torque_max = motor.torque_max;
      joint.viscous_friction = motor.viscous_friction;
      joint.has_motor = true;
    }
    out.links_[joint.child_link].parent_joint = j;
    out.links_[joint.child_link].parent_link = joint.parent_link;
  }

  out.frames_.resize(static_cast<int>(model.frames.size()));
  for (std::size_t i = 0; i < model.frames.size(); ++i) {
    const auto& spec = model.frames[i];
    auto& frame = out.frames_[i];
    frame.name = spec.name;
    frame.link = model.link_index(spec.link);
    Eigen::Vector3d xyz = spec.xyz;
    const int axis = model.links[frame.link].shape.growth_axis;
    xyz(axis) *= lm[frame.link];
    frame.local = Pose(rpy_to_rotation(spec.rpy), xyz);
  }

  // Parents-before-children order for forward propagation.
  out.link_order_.clear();
  out.link_order_.reserve(model.num_links());
  std::vector<bool> placed(model.num_links(), false);
  out.link_order_.push_back(out.base_link_);
  placed[out.base_link_] = true;
  bool progress = true;
  while (static_cast<int>(out.link_order_.size()) < model.num_links() && progress) {
    progress = false;
    for (int i = 0; i < model.num_links(); ++i) {
      if (placed[i] || out.links_[i].parent_link < 0) continue;
      if (placed[out.links_[i].parent_link]) {
        out.link_order_.push_back(i);
        placed[i] = true;
        progress = true;
      }
    }
  }
  if (static_cast<int>(out.link_order_.size()) != model.num_links()) {
    throw ModelError("model topology is not a tree rooted at the base link");
  }

  out.symmetry_ = model.symmetry_matrix();
  return out;
}

ResolvedModel resolve(const KinematicModel& model) { return resolve(model, model.nominal_params()); }

}  // namespace colift
