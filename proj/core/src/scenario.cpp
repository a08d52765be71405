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

#include "colift/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "colift/errors.hpp"
#include "colift/model_io.hpp"

namespace colift {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& origin, const std::string& what) {
  throw ModelError(origin + ": " + what);
}

Eigen::Vector3d vec3(const ordered_json& j, const char* key, const std::string& origin,
                     const Eigen::Vector3d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 3) {
    schema_error(origin, std::string("field '") + key + "' must be an array of 3 numbers");
  }
  return Eigen::Vector3d(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

Eigen::Vector2d vec2(const ordered_json& j, const char* key, const std::string& origin,
                     const Eigen::Vector2d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j[key];
  if (!a.is_array() || a.size() != 2) {
    schema_error(origin, std::string("field '") + key + "' must be an array of 2 numbers");
  }
  return Eigen::Vector2d(a[0].get<double>(), a[1].get<double>());
}

Eigen::VectorXd vec_n(const ordered_json& j, const char* key, const std::string& origin) {
  if (!j.contains(key)) return Eigen::VectorXd();
  const auto& a = j[key];
  if (!a.is_array()) schema_error(origin, std::string("field '") + key + "' must be an array");
  Eigen::VectorXd v(static_cast<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number())
      schema_error(origin, std::string("field '") + key + "' must hold numbers");
    v(static_cast<int>(i)) = a[i].get<double>();
  }
  return v;
}

AgentRole role_from_name(const std::string& s, const std::string& origin) {
  if (s == "human") return AgentRole::kHuman;
  if (s == "robot") return AgentRole::kRobot;
  schema_error(origin, "contact agent must be human|robot, got '" + s + "'");
}

AgentPlacement placement_from_json(const ordered_json& j, const std::string& origin) {
  AgentPlacement p;
  p.xyz = vec3(j, "xyz", origin, Eigen::Vector3d::Zero());
  p.rpy = vec3(j, "rpy", origin, Eigen::Vector3d::Zero());
  p.joints = vec_n(j, "joints", origin);
  return p;
}

SystemState agent_state(const AgentPlacement& placement, int num_joints,
                        const std::string& who) {
  Eigen::VectorXd joints = placement.joints;
  if (joints.size() == 0) joints = Eigen::VectorXd::Zero(num_joints);
  if (joints.size() != num_joints)
    throw ModelError("placement for " + who + " lists " + std::to_string(joints.size()) +
                     " joints, model has " + std::to_string(num_joints));
  SystemState state = SystemState::zero(num_joints);
  state.base_position = placement.xyz;
  state.base_quaternion = rotation_to_quaternion(rpy_to_rotation(placement.rpy));
  state.joint_positions = joints;
  return state;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text, const std::string& origin,
                                 const std::filesystem::path& base_dir) {
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

  Scenario sc;
  sc.name = j.value("name", std::string("scenario"));
  sc.output_dir = j.value("output_dir", std::string("out"));

  if (!j.contains("robot_model") || !j["robot_model"].is_string())
    schema_error(origin, "missing 'robot_model' file reference");
  sc.robot = load_model(base_dir / j["robot_model"].get<std::string>());

  if (!j.contains("human_models") || !j["human_models"].is_array() || j["human_models"].empty())
    schema_error(origin, "'human_models' must be a non-empty array of file references");
  for (const auto& h : j["human_models"])
    sc.humans.push_back(load_model(base_dir / h.get<std::string>()));

  if (!j.contains("loads") || !j["loads"].is_array() || j["loads"].empty())
    schema_error(origin, "'loads' must be a non-empty array");
  for (const auto& lj : j["loads"]) {
    LoadDef load;
    load.name = lj.value("name", std::string("load"));
    if (!lj.contains("mass") || !lj["mass"].is_number() || lj["mass"].get<double>() <= 0.0)
      schema_error(origin, "load '" + load.name + "' needs a positive mass");
    load.mass = lj["mass"].get<double>();
    load.dimensions = vec3(lj, "dimensions", origin, Eigen::Vector3d::Ones());
    if (load.dimensions.minCoeff() <= 0.0)
      schema_error(origin, "load '" + load.name + "' dimensions must be positive");
    if (lj.contains("frames")) {
      for (const auto& fj : lj["frames"]) {
        FrameSpec frame;
        frame.name = fj.value("name", std::string());
        if (frame.name.empty()) schema_error(origin, "load frames need names");
        frame.link = "box";
        frame.xyz = vec3(fj, "xyz", origin, Eigen::Vector3d::Zero());
        frame.rpy = vec3(fj, "rpy", origin, Eigen::Vector3d::Zero());
        load.frames.push_back(std::move(frame));
      }
    }
    sc.loads.push_back(std::move(load));
  }

  if (!j.contains("heights") || !j["heights"].is_array() || j["heights"].empty())
    schema_error(origin, "'heights' must be a non-empty array of lift heights");
  for (const auto& h : j["heights"]) sc.heights.push_back(h.get<double>());
  for (std::size_t k = 1; k < sc.heights.size(); ++k) {
    if (sc.heights[k] <= sc.heights[k - 1])
      schema_error(origin, "heights must be strictly increasing");
  }

  sc.gravity = vec3(j, "gravity", origin, Eigen::Vector3d(0.0, 0.0, -9.81));

  if (!j.contains("contacts") || !j["contacts"].is_object())
    schema_error(origin, "'contacts' must be an object with environment/grasps arrays");
  const auto& cj = j["contacts"];
  if (cj.contains("environment")) {
    for (const auto& ej : cj["environment"]) {
      ContactSpec c;
      c.kind = ContactKind::kEnvironment;
      c.owner = role_from_name(ej.value("agent", std::string()), origin);
      c.frame = ej.value("frame", std::string());
      if (c.frame.empty()) schema_error(origin, "environment contact needs a 'frame'");
      c.friction = ej.value("friction", 0.8);
      if (c.friction <= 0.0) schema_error(origin, "environment friction must be positive");
      c.cop_min = vec2(ej, "cop_min", origin, Eigen::Vector2d(-0.05, -0.05));
      c.cop_max = vec2(ej, "cop_max", origin, Eigen::Vector2d(0.05, 0.05));
      c.torsion_coeff = ej.value("torsion", 0.1);
      sc.contacts.push_back(std::move(c));
    }
  }
  if (cj.contains("grasps")) {
    for (const auto& gj : cj["grasps"]) {
      ContactSpec c;
      c.kind = ContactKind::kGrasp;
      c.owner = role_from_name(gj.value("agent", std::string()), origin);
      c.frame = gj.value("frame", std::string());
      c.paired_load_frame = gj.value("load_frame", std::string());
      if (c.frame.empty() || c.paired_load_frame.empty())
        schema_error(origin, "grasp contacts need 'frame' and 'load_frame'");
      c.wrench_dofs = gj.value("wrench_dofs", 6);
      if (c.wrench_dofs != 3 && c.wrench_dofs != 6)
        schema_error(origin, "grasp wrench_dofs must be 3 or 6");
      sc.contacts.push_back(std::move(c));
    }
  }

  // Every load must carry every grasp frame the contact list references.
  for (const ContactSpec& c : sc.contacts) {
    if (c.kind != ContactKind::kGrasp) continue;
    for (const LoadDef& load : sc.loads) {
      bool found = std::any_of(load.frames.begin(), load.frames.end(),
                               [&](const FrameSpec& f) { return f.name == c.paired_load_frame; });
      if (!found)
        schema_error(origin, "load '" + load.name + "' lacks grasp frame '" +
                                 c.paired_load_frame + "'");
    }
  }

  if (!j.contains("placement") || !j["placement"].is_object())
    schema_error(origin, "'placement' must give initial robot/human poses");
  const auto& pj = j["placement"];
  if (!pj.contains("robot")) schema_error(origin, "placement needs a 'robot' block");
  sc.robot_placement = placement_from_json(pj["robot"], origin);
  if (!pj.contains("humans")) schema_error(origin, "placement needs a 'humans' block");
  if (pj["humans"].is_object()) {
    AgentPlacement one = placement_from_json(pj["humans"], origin);
    sc.human_placements.assign(sc.humans.size(), one);
  } else if (pj["humans"].is_array()) {
    for (const auto& hj : pj["humans"])
      sc.human_placements.push_back(placement_from_json(hj, origin));
    if (sc.human_placements.size() != sc.humans.size())
      schema_error(origin, "placement.humans must match human_models in length");
  } else {
    schema_error(origin, "placement.humans must be an object or array");
  }
  sc.load_xy = vec2(pj, "load_xy", origin, Eigen::Vector2d::Zero());

  sc.ground_rpy = vec3(j, "ground_rpy", origin, Eigen::Vector3d::Zero());
  sc.load_rpy = vec3(j, "load_rpy", origin, Eigen::Vector3d::Zero());

  if (j.contains("reference_postures")) {
    const auto& rj = j["reference_postures"];
    sc.human_reference = vec_n(rj, "human", origin);
    sc.robot_reference = vec_n(rj, "robot", origin);
  }

  if (j.contains("weights")) {
    const auto& wj = j["weights"];
    sc.weights.torque_weight = wj.value("torque", 1.0);
    sc.weights.posture_weight = wj.value("posture", 1e-2);
    sc.weights.continuity_weight = wj.value("continuity", 1e-2);
    sc.weights.fitness_scale = wj.value("fitness_scale", 100.0);
    sc.weights.wrench_reg = wj.value("wrench_reg", 1e-8);
    sc.weights.torque_scaling = vec_n(wj, "torque_scaling", origin);
  }

  if (j.contains("solver")) {
    const auto& sj = j["solver"];
    sc.solver.tol_feas = sj.value("tol_feas", 1e-6);
    sc.solver.tol_stat = sj.value("tol_stat", 1e-6);
    sc.solver.max_iterations = sj.value("max_iterations", 400);
    sc.solver.max_restarts = sj.value("max_restarts", 3);
  }

  sc.domains.num_lengths = static_cast<int>(sc.robot.groups.lengths.size());
  sc.domains.num_densities = static_cast<int>(sc.robot.groups.densities.size());
  sc.domains.num_motors = static_cast<int>(sc.robot.groups.motors.size());
  for (const MotorSpec& m : sc.robot.motor_catalog) sc.domains.motor_set.push_back(m.id);

  if (j.contains("evolution")) {
    const auto& ej = j["evolution"];
    sc.evolution.population = ej.value("population", 20);
    sc.evolution.tournament_k = ej.value("tournament_k", 3);
    sc.evolution.elitism = ej.value("elitism", 1);
    sc.evolution.max_generations = ej.value("max_generations", 100);
    sc.evolution.mutation_fraction = ej.value("mutation_fraction", 0.1);
    sc.evolution.stop_improvement = ej.value("stop_improvement", 0.05);
    sc.evolution.crossover_kind = ej.value("crossover_kind", std::string("uniform"));
    sc.evolution.seed = ej.value("seed", 0ULL);
    sc.evolution.threads = ej.value("threads", 1);

    sc.domains.length_min = ej.value("length_min", 0.5);
    sc.domains.length_max = ej.value("length_max", 2.0);
    Eigen::VectorXd density_set = vec_n(ej, "density_set", origin);
    sc.domains.density_set.assign(density_set.data(), density_set.data() + density_set.size());
    if (ej.contains("motor_set")) {
      sc.domains.motor_set.clear();
      for (const auto& m : ej["motor_set"]) {
        std::string id = m.get<std::string>();
        sc.robot.motor_index(id);  // must name a catalog motor
        sc.domains.motor_set.push_back(id);
      }
    }
    if (ej.contains("warm_start")) {
      for (const auto& w : ej["warm_start"]) {
        std::string ref = w.get<std::string>();
        KinematicModel seed_model =
            ref == "nominal" ? sc.robot : load_model(base_dir / ref);
        sc.evolution.warm_start.push_back(seed_model.nominal_params());
      }
    }
  }
  if (sc.domains.num_densities > 0 && sc.domains.density_set.empty())
    schema_error(origin, "robot has density genes; evolution.density_set is required");
  if (sc.domains.num_motors > 0 && sc.domains.motor_set.empty())
    schema_error(origin, "robot has motor genes but no catalog motors to choose from");

  if (j.contains("report_joints")) {
    for (const auto& r : j["report_joints"]) {
      std::string name = r.get<std::string>();
      for (const KinematicModel& human : sc.humans) human.joint_index(name);
      sc.report_joints.push_back(std::move(name));
    }
  }

  DiagnosticList diags = sc.robot.validate();
  for (const KinematicModel& human : sc.humans) {
    DiagnosticList d = human.validate();
    diags.insert(diags.end(), d.begin(), d.end());
  }
  if (!diags.empty()) {
    std::string msg = origin + ": referenced models fail validation:";
    for (const Diagnostic& d : diags) msg += "\n  [" + d.code + "] " + d.message;
    throw ModelError(msg);
  }

  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str(), path.filename().string(),
                                 path.has_parent_path() ? path.parent_path()
                                                        : std::filesystem::path("."));
}

KinematicModel make_load_model(const LoadDef& def) {
  KinematicModel load;
  load.name = def.name;
  load.base_link = "box";
  LinkSpec body;
  body.name = "box";
  body.shape.kind = ShapeKind::kBox;
  body.shape.dims = def.dimensions;
  double volume = def.dimensions.prod();
  body.density = def.mass / volume;
  load.links.push_back(std::move(body));
  load.frames = def.frames;
  return load;
}

CompositeSystem make_composite(const Scenario& scenario, int human_index, int load_index) {
  if (human_index < 0 || human_index >= static_cast<int>(scenario.humans.size()) ||
      load_index < 0 || load_index >= static_cast<int>(scenario.loads.size())) {
    throw ContractError("make_composite: case index out of range");
  }
  CompositeSystem sys;
  sys.human = scenario.humans[human_index];
  sys.robot = scenario.robot;
  sys.load = make_load_model(scenario.loads[load_index]);
  sys.contacts = scenario.contacts;
  sys.gravity = scenario.gravity;
  return sys;
}

TaskSpec make_task(const Scenario& scenario, int human_index) {
  TaskSpec task;
  task.load_heights = scenario.heights;
  int n1 = scenario.humans[human_index].num_joints();
  int n2 = scenario.robot.num_joints();
  task.human_reference =
      scenario.human_reference.size() > 0 ? scenario.human_reference : Eigen::VectorXd::Zero(n1);
  task.robot_reference =
      scenario.robot_reference.size() > 0 ? scenario.robot_reference : Eigen::VectorXd::Zero(n2);
  task.ground_rotation = rpy_to_rotation(scenario.ground_rpy);
  task.load_rotation = rpy_to_rotation(scenario.load_rpy);
  task.human_yaw = scenario.human_placements[human_index].rpy.z();
  task.robot_yaw = scenario.robot_placement.rpy.z();
  task.load_xy = scenario.load_xy;
  return task;
}

PostureInit make_init(const Scenario& scenario, int human_index, int load_index) {
  (void)load_index;  // same placement guess for every load
  PostureInit init;
  init.human = agent_state(scenario.human_placements[human_index],
                           scenario.humans[human_index].num_joints(),
                           "human " + std::to_string(human_index));
  init.robot = agent_state(scenario.robot_placement, scenario.robot.num_joints(), "robot");
  init.load = SystemState::zero(0);
  init.load.base_position << scenario.load_xy, scenario.heights.front();
  init.load.base_quaternion = rotation_to_quaternion(rpy_to_rotation(scenario.load_rpy));
  return init;
}

FitnessContext make_fitness_context(const Scenario& scenario) {
  FitnessContext ctx;
  ctx.fitness_scale = scenario.weights.fitness_scale;
  ctx.solver = scenario.solver;
  ctx.seed = scenario.evolution.seed;
  for (int h = 0; h < static_cast<int>(scenario.humans.size()); ++h) {
    for (int o = 0; o < static_cast<int>(scenario.loads.size()); ++o) {
      PostureCase pc;
      pc.human_index = h;
      pc.load_index = o;
      pc.init = make_init(scenario, h, o);
      CompositeSystem sys = make_composite(scenario, h, o);
      TaskSpec task = make_task(scenario, h);
      CostWeights weights = scenario.weights;
      pc.build = [sys, task, weights](const HardwareParams& params) {
        return build_problem(sys, params, task, weights);
      };
      ctx.cases.push_back(std::move(pc));
    }
  }
  return ctx;
}

}  // namespace colift
