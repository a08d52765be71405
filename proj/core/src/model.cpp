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

#include "colift/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace colift {

namespace {

template <typename T>
int find_by_name(const std::vector<T>& items, const std::string& name) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

int KinematicModel::link_index(const std::string& link_name) const {
  const int i = find_by_name(links, link_name);
  if (i < 0) throw ModelError("unknown link: " + link_name);
  return i;
}

int KinematicModel::joint_index(const std::string& joint_name) const {
  const int i = find_by_name(joints, joint_name);
  if (i < 0) throw ModelError("unknown joint: " + joint_name);
  return i;
}

int KinematicModel::frame_index(const std::string& frame_name) const {
  const int i = find_by_name(frames, frame_name);
  if (i < 0) throw ModelError("unknown frame: " + frame_name);
  return i;
}

bool KinematicModel::has_frame(const std::string& frame_name) const {
  return find_by_name(frames, frame_name) >= 0;
}

int KinematicModel::motor_index(const std::string& motor_id) const {
  for (std::size_t i = 0; i < motor_catalog.size(); ++i) {
    if (motor_catalog[i].id == motor_id) return static_cast<int>(i);
  }
  throw ModelError("unknown motor id: " + motor_id);
}

HardwareParams KinematicModel::nominal_params() const {
  HardwareParams p;
  p.length_multipliers.resize(static_cast<int>(groups.lengths.size()));
  for (std::size_t g = 0; g < groups.lengths.size(); ++g) {
    p.length_multipliers(static_cast<int>(g)) =
        links[link_index(groups.lengths[g].front())].length_multiplier;
  }
  p.densities.resize(static_cast<int>(groups.densities.size()));
  for (std::size_t g = 0; g < groups.densities.size(); ++g) {
    p.densities(static_cast<int>(g)) = links[link_index(groups.densities[g].front())].density;
  }
  for (const auto& group : groups.motors) {
    auto it = motor_bindings.find(group.front());
    if (it == motor_bindings.end()) {
      throw ModelError("motor group member without binding: " + group.front());
    }
    p.motor_ids.push_back(it->second);
  }
  return p;
}

Eigen::MatrixXd KinematicModel::symmetry_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<int>(symmetry.size()), num_joints());
  for (std::size_t r = 0; r < symmetry.size(); ++r) {
    a(static_cast<int>(r), joint_index(symmetry[r].joint_a)) = 1.0;
    a(static_cast<int>(r), joint_index(symmetry[r].joint_b)) -= static_cast<double>(symmetry[r].sign);
  }
  return a;
}

DiagnosticList KinematicModel::validate() const {
  DiagnosticList diags;
  auto add = [&diags](const std::string& code, const std::string& msg) {
    diags.push_back({code, msg});
  };

  if (links.empty()) {
    add("E_NO_LINKS", "model has no links");
    return diags;
  }

  std::set<std::string> link_names;
  for (const auto& l : links) {
    if (!link_names.insert(l.name).second) add("E_DUPLICATE_LINK", "duplicate link name: " + l.name);
    if (!(l.density > 0.0)) add("E_DENSITY_POSITIVE", "link " + l.name + ": density must be > 0");
    if (!(l.length_multiplier > 0.0)) {
      add("E_MULTIPLIER_POSITIVE", "link " + l.name + ": length multiplier must be > 0");
    }
    try {
      (void)link_inertia(l.shape, std::max(l.density, 1e-300), std::max(l.length_multiplier, 1e-300));
    } catch (const ModelError& e) {
      add("E_SHAPE_INVALID", "link " + l.name + ": " + e.what());
    }
  }

  if (link_names.count(base_link) == 0) {
    add("E_BASE_LINK_UNKNOWN", "base link not found: " + base_link);
    return diags;
  }

  // n joints must connect n+1 links into a tree rooted at the base.
  if (num_links() != num_joints() + 1) {
    add("E_LINK_JOINT_COUNT", "expected n+1 links for n joints");
  }
  std::set<std::string> joint_names;
  std::map<std::string, std::string> parent_of;  // child link -> parent link
  for (const auto& j : joints) {
    if (!joint_names.insert(j.name).second) {
      add("E_DUPLICATE_JOINT", "duplicate joint name: " + j.name);
    }
    if (link_names.count(j.parent_link) == 0) {
      add("E_JOINT_PARENT_UNKNOWN", "joint " + j.name + ": unknown parent " + j.parent_link);
      continue;
    }
    if (link_names.count(j.child_link) == 0) {
      add("E_JOINT_CHILD_UNKNOWN", "joint " + j.name + ": unknown child " + j.child_link);
      continue;
    }
    if (j.child_link == base_link) {
      add("E_TOPOLOGY_BASE_CHILD", "joint " + j.name + ": base link cannot be a joint child");
    }
    if (parent_of.count(j.child_link)) {
      add("E_TOPOLOGY_MULTI_PARENT", "link " + j.child_link + " has more than one parent joint");
    } else {
      parent_of[j.child_link] = j.parent_link;
    }
    if (j.axis.norm() < 1e-12) add("E_JOINT_AXIS_ZERO", "joint " + j.name + ": zero axis");
    if (!(j.pos_min < j.pos_max)) {
      add("E_LIMITS_ORDER", "joint " + j.name + ": pos_min must be < pos_max");
    }
  }

  // Cycle / reachability: walk each link up to the base.
  for (const auto& l : links) {
    if (l.name == base_link) continue;
    std::set<std::string> seen;
    std::string cur = l.name;
    bool reached = false;
    while (true) {
      if (!seen.insert(cur).second) {
        add("E_TOPOLOGY_CYCLE", "cycle through link " + cur);
        break;
      }
      auto it = parent_of.find(cur);
      if (it == parent_of.end()) break;  // orphan; reported below
      cur = it->second;
      if (cur == base_link) {
        reached = true;
        break;
      }
    }
    if (!reached && parent_of.count(l.name) == 0) {
      add("E_TOPOLOGY_DISCONNECTED", "link " + l.name + " is not connected to the base");
    }
  }

  for (const auto& f : frames) {
    if (link_names.count(f.link) == 0) {
      add("E_FRAME_UNKNOWN_LINK", "frame " + f.name + ": unknown link " + f.link);
    }
  }

  std::set<std::string> catalog_ids;
  for (const auto& m : motor_catalog) {
    if (!catalog_ids.insert(m.id).second) add("E_DUPLICATE_MOTOR", "duplicate motor id: " + m.id);
    if (!(m.torque_min < 0.0 && m.torque_max > 0.0)) {
      add("E_MOTOR_TORQUE_RANGE", "motor " + m.id + ": need torque_min < 0 < torque_max");
    }
    if (!(m.rotor_inertia > 0.0)) add("E_MOTOR_INERTIA", "motor " + m.id + ": rotor inertia must be > 0");
    if (!(m.inv_gear_ratio >= 1.0)) add("E_MOTOR_GEAR", "motor " + m.id + ": 1/Gamma must be >= 1");
    if (m.viscous_friction < 0.0) add("E_MOTOR_FRICTION", "motor " + m.id + ": K_v must be >= 0");
  }
  if (actuation == ActuationKind::kMotor) {
    for (const auto& j : joints) {
      auto it = motor_bindings.find(j.name);
      if (it == motor_bindings.end()) {
        add("E_MOTOR_BINDING_MISSING", "actuated joint " + j.name + " has no motor binding");
      } else if (catalog_ids.count(it->second) == 0) {
        add("E_MOTOR_UNKNOWN_ID", "joint " + j.name + ": motor id " + it->second + " not in catalog");
      }
    }
  }
  for (const auto& [joint, motor] : motor_bindings) {
    if (joint_names.count(joint) == 0) {
      add("E_BINDING_UNKNOWN_JOINT", "motor binding for unknown joint " + joint);
    }
    (void)motor;
  }

  auto check_groups = [&](const std::vector<std::vector<std::string>>& gs, bool link_group,
                          const char* what) {
    std::set<std::string> used;
    for (const auto& g : gs) {
      if (g.empty()) {
        add("E_GROUP_EMPTY", std::string(what) + " group is empty");
        continue;
      }
      for (const auto& member : g) {
        const bool known = link_group ? link_names.count(member) > 0 : joint_names.count(member) > 0;
        if (!known) {
          add("E_GROUP_UNKNOWN_MEMBER", std::string(what) + " group member unknown: " + member);
          continue;
        }
        if (!used.insert(member).second) {
          add("E_GROUP_OVERLAP", std::string(what) + " group member repeated: " + member);
        }
      }
    }
  };
  check_groups(groups.lengths, true, "length");
  check_groups(groups.densities, true, "density");
  check_groups(groups.motors, false, "motor");

  // Group members must agree on nominal values so that nominal_params() is a
  // faithful identity.
  for (const auto& g : groups.lengths) {
    if (g.empty()) continue;
    const int first = find_by_name(links, g.front());
    if (first < 0) continue;
    for (const auto& member : g) {
      const int i = find_by_name(links, member);
      if (i >= 0 && links[i].length_multiplier != links[first].length_multiplier) {
        add("E_GROUP_MIXED_NOMINALS", "length group members disagree on nominal l_m: " + member);
      }
    }
  }
  for (const auto& g : groups.densities) {
    if (g.empty()) continue;
    const int first = find_by_name(links, g.front());
    if (first < 0) continue;
    for (const auto& member : g) {
      const int i = find_by_name(links, member);
      if (i >= 0 && links[i].density != links[first].density) {
        add("E_GROUP_MIXED_NOMINALS", "density group members disagree on nominal rho: " + member);
      }
    }
  }

  // Symmetry rows reference known joints and admit a feasible configuration
  // within the joint limits.
  for (const auto& p : symmetry) {
    const int ia = find_by_name(joints, p.joint_a);
    const int ib = find_by_name(joints, p.joint_b);
    if (ia < 0 || ib < 0) {
      add("E_SYMMETRY_UNKNOWN_JOINT", "symmetry pair references unknown joint");
      continue;
    }
    if (p.sign != 1 && p.sign != -1) {
      add("E_SYMMETRY_SIGN", "symmetry sign must be +1 or -1");
      continue;
    }
    const auto& a = joints[ia];
    const auto& b = joints[ib];
    // s_a = sign * s_b must intersect both limit boxes.
    const double blo = p.sign > 0 ? b.pos_min : -b.pos_max;
    const double bhi = p.sign > 0 ? b.pos_max : -b.pos_min;
    if (std::max(a.pos_min, blo) > std::min(a.pos_max, bhi)) {
      add("E_SYMMETRY_UNSAT", "symmetry pair (" + p.joint_a + ", " + p.joint_b +
                                  ") incompatible with joint limits");
    }
  }

  return diags;
}

}  // namespace colift
