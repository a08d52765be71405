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

#ifndef COLIFT_SCENARIO_HPP_
#define COLIFT_SCENARIO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/composite.hpp"
#include "colift/evolution.hpp"
#include "colift/model.hpp"
#include "colift/posture_problem.hpp"

namespace colift {

// A payload option: a single box body plus the grasp frames on it. Every
// load must define all frame names the scenario's grasp contacts reference.
struct LoadDef {
  std::string name;
  double mass = 1.0;             // kg
  Eigen::Vector3d dimensions = Eigen::Vector3d::Ones();  // full extents, m
  std::vector<FrameSpec> frames;
};

// Initial pose guess for one agent; joints empty means all-zero.
struct AgentPlacement {
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  Eigen::Vector3d rpy = Eigen::Vector3d::Zero();
  Eigen::VectorXd joints;
};

// Scenario schema v1 (see docs/schemas/scenario_v1.md): one robot skeleton,
// n_h human models, n_o loads, n_k lifting heights, plus the contact layout,
// weights, solver options, and the evolution block.
struct Scenario {
  std::string name;
  std::string output_dir = "out";
  KinematicModel robot;
  std::vector<KinematicModel> humans;
  std::vector<LoadDef> loads;
  std::vector<double> heights;
  Eigen::Vector3d gravity = Eigen::Vector3d(0.0, 0.0, -9.81);
  std::vector<ContactSpec> contacts;
  AgentPlacement robot_placement;
  std::vector<AgentPlacement> human_placements;  // one per human model
  Eigen::Vector2d load_xy = Eigen::Vector2d::Zero();
  Eigen::Vector3d ground_rpy = Eigen::Vector3d::Zero();
  Eigen::Vector3d load_rpy = Eigen::Vector3d::Zero();
  Eigen::VectorXd human_reference;  // empty => zeros
  Eigen::VectorXd robot_reference;
  CostWeights weights;
  PostureSolverOptions solver;
  EvolutionConfig evolution;
  GeneDomains domains;
  std::vector<std::string> report_joints;  // human joints of the torque table
};

Scenario scenario_from_json_text(const std::string& text, const std::string& origin,
                                 const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

// The load as a one-body model carrying the grasp frames.
KinematicModel make_load_model(const LoadDef& def);

CompositeSystem make_composite(const Scenario& scenario, int human_index, int load_index);
TaskSpec make_task(const Scenario& scenario, int human_index);
PostureInit make_init(const Scenario& scenario, int human_index, int load_index);

// All n_h x n_o cases wired up for fitness evaluation. Each case builds its
// problem from a candidate design of the scenario's robot skeleton.
FitnessContext make_fitness_context(const Scenario& scenario);

}  // namespace colift

#endif  // COLIFT_SCENARIO_HPP_
