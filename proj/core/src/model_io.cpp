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

#include "colift/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "colift/errors.hpp"

namespace colift {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& origin, const std::string& what) {
  throw ModelError(origin + ": " + what);
}

double require_number(const ordered_json& j, const char* key, const std::string& origin) {
  if (!j.contains(key) || !j[key].is_number())
    schema_error(origin, std::string("missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

std::string require_string(const ordered_json& j, const char* key, const std::string& origin) {
  if (!j.contains(key) || !j[key].is_string())
    schema_error(origin, std::string("missing or non-string field '") + key + "'");
  return j[key].get<std::string>();
}

Eigen::Vector3d vec3(const ordered_json& j, const char* key, const std::string& origin,
                     const Eigen::Vector3d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
      !a[2].is_number()) {
    schema_error(origin, std::string("field '") + key + "' must be an array of 3 numbers");
  }
  return Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

ordered_json vec3_json(const Eigen::Vector3d& v) {
  return ordered_json::array({v.x(), v.y(), v.z()});
}

int axis_from_name(const std::string& s, const std::string& origin) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  schema_error(origin, "growth_axis must be one of x|y|z, got '" + s + "'");
}

const char* axis_name(int axis) { return axis == 0 ? "x" : axis == 1 ? "y" : "z"; }

ShapePrimitive shape_from_json(const ordered_json& j, const std::string& origin) {
  ShapePrimitive shape;
  std::string kind = require_string(j, "kind", origin);
  if (kind == "sphere") {
    shape.kind = ShapeKind::kSphere;
  } else if (kind == "cylinder") {
    shape.kind = ShapeKind::kCylinder;
  } else if (kind == "box") {
    shape.kind = ShapeKind::kBox;
  } else {
    schema_error(origin, "shape kind must be sphere|cylinder|box, got '" + kind + "'");
  }
  if (!j.contains("dims") || !j["dims"].is_array())
    schema_error(origin, "shape needs a 'dims' array");
  const auto& dims = j["dims"];
  for (std::size_t i = 0; i < dims.size() && i < 3; ++i) {
    if (!dims[i].is_number()) schema_error(origin, "shape dims must be numbers");
    shape.dims(static_cast<int>(i)) = dims[i].get<double>();
  }
  if (j.contains("growth_axis"))
    shape.growth_axis = axis_from_name(j["growth_axis"].get<std::string>(), origin);
  shape.center_offset = vec3(j, "center_offset", origin, Eigen::Vector3d::Zero());
  return shape;
}

ordered_json shape_to_json(const ShapePrimitive& shape) {
  ordered_json j;
  switch (shape.kind) {
    case ShapeKind::kSphere:
      j["kind"] = "sphere";
      j["dims"] = ordered_json::array({shape.dims(0)});
      break;
    case ShapeKind::kCylinder:
      j["kind"] = "cylinder";
      j["dims"] = ordered_json::array({shape.dims(0), shape.dims(1)});
      break;
    case ShapeKind::kBox:
      j["kind"] = "box";
      j["dims"] = ordered_json::array({shape.dims(0), shape.dims(1), shape.dims(2)});
      break;
  }
  j["growth_axis"] = axis_name(shape.growth_axis);
  if (shape.center_offset != Eigen::Vector3d::Zero())
    j["center_offset"] = vec3_json(shape.center_offset);
  return j;
}

std::vector<std::vector<std::string>> name_groups(const ordered_json& j, const char* key,
                                                  const std::string& origin) {
  std::vector<std::vector<std::string>> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) schema_error(origin, std::string("'") + key + "' must be an array");
  for (const auto& group : j[key]) {
    if (!group.is_array()) schema_error(origin, std::string(key) + " entries must be arrays");
    std::vector<std::string> names;
    for (const auto& n : group) {
      if (!n.is_string()) schema_error(origin, std::string(key) + " members must be strings");
      names.push_back(n.get<std::string>());
    }
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace

KinematicModel model_from_json_text(const std::string& text, const std::string& origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(origin + ": " + e.what());
  }
  if (!j.is_object()) schema_error(origin, "top level must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != 1) {
    schema_error(origin, "schema_version must be the integer 1");
  }

  KinematicModel model;
  model.name = require_string(j, "name", origin);
  model.base_link = require_string(j, "base_link", origin);

  std::string actuation = j.value("actuation", std::string("direct"));
  if (actuation == "motor") {
    model.actuation = ActuationKind::kMotor;
  } else if (actuation == "direct") {
    model.actuation = ActuationKind::kDirect;
  } else {
    schema_error(origin, "actuation must be motor|direct, got '" + actuation + "'");
  }

  if (!j.contains("links") || !j["links"].is_array() || j["links"].empty())
    schema_error(origin, "'links' must be a non-empty array");
  for (const auto& lj : j["links"]) {
    LinkSpec link;
    link.name = require_string(lj, "name", origin);
    if (!lj.contains("shape")) schema_error(origin, "link '" + link.name + "' needs a shape");
    link.shape = shape_from_json(lj["shape"], origin + " link " + link.name);
    link.density = lj.value("density", 1000.0);
    link.length_multiplier = lj.value("length_multiplier", 1.0);
    model.links.push_back(std::move(link));
  }

  if (j.contains("joints")) {
    if (!j["joints"].is_array()) schema_error(origin, "'joints' must be an array");
    for (const auto& jj : j["joints"]) {
      JointSpec joint;
      joint.name = require_string(jj, "name", origin);
      std::string kind = jj.value("kind", std::string("revolute"));
      if (kind == "revolute") {
        joint.kind = JointKind::kRevolute;
      } else if (kind == "prismatic") {
        joint.kind = JointKind::kPrismatic;
      } else {
        schema_error(origin, "joint kind must be revolute|prismatic, got '" + kind + "'");
      }
      joint.parent_link = require_string(jj, "parent", origin);
      joint.child_link = require_string(jj, "child", origin);
      joint.origin_xyz = vec3(jj, "origin_xyz", origin, Eigen::Vector3d::Zero());
      joint.origin_rpy = vec3(jj, "origin_rpy", origin, Eigen::Vector3d::Zero());
      joint.axis = vec3(jj, "axis", origin, Eigen::Vector3d::UnitZ());
      joint.pos_min = jj.value("pos_min", -1e9);
      joint.pos_max = jj.value("pos_max", 1e9);
      joint.torque_min = jj.value("torque_min", -1e18);
      joint.torque_max = jj.value("torque_max", 1e18);
      model.joints.push_back(std::move(joint));
    }
  }

  if (j.contains("frames")) {
    if (!j["frames"].is_array()) schema_error(origin, "'frames' must be an array");
    for (const auto& fj : j["frames"]) {
      FrameSpec frame;
      frame.name = require_string(fj, "name", origin);
      frame.link = require_string(fj, "link", origin);
      frame.xyz = vec3(fj, "xyz", origin, Eigen::Vector3d::Zero());
      frame.rpy = vec3(fj, "rpy", origin, Eigen::Vector3d::Zero());
      model.frames.push_back(std::move(frame));
    }
  }

  if (j.contains("motor_catalog")) {
    if (!j["motor_catalog"].is_array()) schema_error(origin, "'motor_catalog' must be an array");
    for (const auto& mj : j["motor_catalog"]) {
      MotorSpec motor;
      motor.id = require_string(mj, "id", origin);
      motor.inv_gear_ratio = require_number(mj, "inv_gear_ratio", origin);
      motor.rotor_inertia = require_number(mj, "rotor_inertia", origin);
      motor.torque_min = mj.value("torque_min", -1e9);
      motor.torque_max = mj.value("torque_max", 1e9);
      motor.viscous_friction = mj.value("viscous_friction", 0.0);
      model.motor_catalog.push_back(std::move(motor));
    }
  }

  if (j.contains("motor_bindings")) {
    if (!j["motor_bindings"].is_object())
      schema_error(origin, "'motor_bindings' must be an object of joint -> motor id");
    for (const auto& [joint, motor] : j["motor_bindings"].items()) {
      if (!motor.is_string()) schema_error(origin, "motor binding for '" + joint + "' must name a motor");
      model.motor_bindings[joint] = motor.get<std::string>();
    }
  }

  if (j.contains("parameter_groups")) {
    const auto& pg = j["parameter_groups"];
    if (!pg.is_object()) schema_error(origin, "'parameter_groups' must be an object");
    model.groups.lengths = name_groups(pg, "lengths", origin);
    model.groups.densities = name_groups(pg, "densities", origin);
    model.groups.motors = name_groups(pg, "motors", origin);
  }

  if (j.contains("symmetry")) {
    if (!j["symmetry"].is_array()) schema_error(origin, "'symmetry' must be an array");
    for (const auto& sj : j["symmetry"]) {
      SymmetryPair pair;
      pair.joint_a = require_string(sj, "a", origin);
      pair.joint_b = require_string(sj, "b", origin);
      pair.sign = sj.value("sign", 1);
      if (pair.sign != 1 && pair.sign != -1)
        schema_error(origin, "symmetry sign must be 1 or -1");
      model.symmetry.push_back(std::move(pair));
    }
  }

  return model;
}

std::string model_to_json_text(const KinematicModel& model) {
  ordered_json j;
  j["schema_version"] = 1;
  j["name"] = model.name;
  j["actuation"] = model.actuation == ActuationKind::kMotor ? "motor" : "direct";
  j["base_link"] = model.base_link;

  j["links"] = ordered_json::array();
  for (const LinkSpec& link : model.links) {
    ordered_json lj;
    lj["name"] = link.name;
    lj["shape"] = shape_to_json(link.shape);
    lj["density"] = link.density;
    lj["length_multiplier"] = link.length_multiplier;
    j["links"].push_back(std::move(lj));
  }

  j["joints"] = ordered_json::array();
  for (const JointSpec& joint : model.joints) {
    ordered_json jj;
    jj["name"] = joint.name;
    jj["kind"] = joint.kind == JointKind::kPrismatic ? "prismatic" : "revolute";
    jj["parent"] = joint.parent_link;
    jj["child"] = joint.child_link;
    jj["origin_xyz"] = vec3_json(joint.origin_xyz);
    jj["origin_rpy"] = vec3_json(joint.origin_rpy);
    jj["axis"] = vec3_json(joint.axis);
    jj["pos_min"] = joint.pos_min;
    jj["pos_max"] = joint.pos_max;
    if (joint.torque_min != -1e18) jj["torque_min"] = joint.torque_min;
    if (joint.torque_max != 1e18) jj["torque_max"] = joint.torque_max;
    j["joints"].push_back(std::move(jj));
  }

  j["frames"] = ordered_json::array();
  for (const FrameSpec& frame : model.frames) {
    ordered_json fj;
    fj["name"] = frame.name;
    fj["link"] = frame.link;
    fj["xyz"] = vec3_json(frame.xyz);
    fj["rpy"] = vec3_json(frame.rpy);
    j["frames"].push_back(std::move(fj));
  }

  if (!model.motor_catalog.empty()) {
    j["motor_catalog"] = ordered_json::array();
    for (const MotorSpec& motor : model.motor_catalog) {
      ordered_json mj;
      mj["id"] = motor.id;
      mj["inv_gear_ratio"] = motor.inv_gear_ratio;
      mj["rotor_inertia"] = motor.rotor_inertia;
      mj["torque_min"] = motor.torque_min;
      mj["torque_max"] = motor.torque_max;
      mj["viscous_friction"] = motor.viscous_friction;
      j["motor_catalog"].push_back(std::move(mj));
    }
  }
  if (!model.motor_bindings.empty()) {
    ordered_json bj;  // std::map keeps joint names sorted, and so stable
    for (const auto& [joint, motor] : model.motor_bindings) bj[joint] = motor;
    j["motor_bindings"] = std::move(bj);
  }

  ordered_json pg;
  pg["lengths"] = model.groups.lengths;
  pg["densities"] = model.groups.densities;
  pg["motors"] = model.groups.motors;
  j["parameter_groups"] = std::move(pg);

  if (!model.symmetry.empty()) {
    j["symmetry"] = ordered_json::array();
    for (const SymmetryPair& pair : model.symmetry) {
      ordered_json sj;
      sj["a"] = pair.joint_a;
      sj["b"] = pair.joint_b;
      sj["sign"] = pair.sign;
      j["symmetry"].push_back(std::move(sj));
    }
  }

  return j.dump(2) + "\n";
}

KinematicModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json_text(buf.str(), path.filename().string());
}

void save_model(const KinematicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file: " + path.string());
  out << model_to_json_text(model);
  if (!out) throw IoError("write failed: " + path.string());
}

KinematicModel apply_params(const KinematicModel& model, const HardwareParams& params) {
  if (params.length_multipliers.size() != static_cast<Eigen::Index>(model.groups.lengths.size()) ||
      params.densities.size() != static_cast<Eigen::Index>(model.groups.densities.size()) ||
      params.motor_ids.size() != model.groups.motors.size()) {
    throw ContractError("apply_params: gene counts do not match the model's parameter groups");
  }
  KinematicModel out = model;
  for (std::size_t g = 0; g < model.groups.lengths.size(); ++g) {
    for (const std::string& name : model.groups.lengths[g])
      out.links[out.link_index(name)].length_multiplier =
          params.length_multipliers(static_cast<int>(g));
  }
  for (std::size_t g = 0; g < model.groups.densities.size(); ++g) {
    for (const std::string& name : model.groups.densities[g])
      out.links[out.link_index(name)].density = params.densities(static_cast<int>(g));
  }
  for (std::size_t g = 0; g < model.groups.motors.size(); ++g) {
    out.motor_index(params.motor_ids[g]);  // must exist in the catalog
    for (const std::string& name : model.groups.motors[g])
      out.motor_bindings[name] = params.motor_ids[g];
  }
  return out;
}

}  // namespace colift
