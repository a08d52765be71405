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

#include "colift/reports.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "colift/errors.hpp"
#include "colift/ipm_solver.hpp"
#include "colift/version.hpp"

namespace colift {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json vec_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json state_json(const SystemState& state) {
  ordered_json j;
  j["position_m"] = ordered_json::array(
      {state.base_position.x(), state.base_position.y(), state.base_position.z()});
  j["quaternion_wxyz"] =
      ordered_json::array({state.base_quaternion(0), state.base_quaternion(1),
                           state.base_quaternion(2), state.base_quaternion(3)});
  j["joints_rad"] = vec_json(state.joint_positions);
  return j;
}

// Pooled |tau| statistics (robot motor block) of one design at one height.
struct TorquePool {
  double mean = 0.0;
  double var = 0.0;
  double max = 0.0;
  double norm = 0.0;
};

TorquePool pool_robot_torques(const FitnessReport& report, int height, int robot_joints) {
  TorquePool pool;
  double sum = 0.0, sumsq = 0.0;
  int count = 0;
  for (const CaseResult& cr : report.cases) {
    const Eigen::VectorXd& tau = cr.height_torques[height];
    for (int i = 0; i < robot_joints; ++i) {
      double a = std::abs(tau(i));
      sum += a;
      sumsq += a * a;
      pool.max = std::max(pool.max, a);
      ++count;
    }
  }
  if (count > 0) {
    pool.mean = sum / count;
    pool.var = sumsq / count - pool.mean * pool.mean;
    pool.norm = std::sqrt(sumsq);
  }
  return pool;
}

// Norm of the human joint-torque block pooled over cases at one height.
double human_block_norm(const FitnessReport& report, int height, int robot_joints) {
  double sumsq = 0.0;
  for (const CaseResult& cr : report.cases) {
    const Eigen::VectorXd& tau = cr.height_torques[height];
    sumsq += tau.tail(tau.size() - robot_joints).squaredNorm();
  }
  return std::sqrt(sumsq);
}

// Named human joint torque, averaged over the scenario's humans, for one
// design x load x height cell.
double named_joint_torque(const Scenario& scenario, const FitnessReport& report,
                          const std::string& joint, int load, int height) {
  int n2 = scenario.robot.num_joints();
  int n_loads = static_cast<int>(scenario.loads.size());
  double sum = 0.0;
  int count = 0;
  for (int h = 0; h < static_cast<int>(scenario.humans.size()); ++h) {
    const CaseResult& cr = report.cases[h * n_loads + load];
    sum += cr.height_torques[height](n2 + scenario.humans[h].joint_index(joint));
    ++count;
  }
  return sum / count;
}

void check_comparable(const Scenario& scenario, const FitnessReport& report,
                      const std::string& label) {
  std::size_t expect = scenario.humans.size() * scenario.loads.size();
  if (report.cases.size() != expect)
    throw ContractError("compare: report '" + label + "' does not match the scenario's cases");
  if (!report.all_solved)
    throw ContractError("compare: design '" + label + "' has unsolved cases");
  for (const CaseResult& cr : report.cases) {
    if (cr.height_torques.size() != scenario.heights.size())
      throw ContractError("compare: report '" + label + "' misses height solutions");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string stats_csv_text(const std::vector<GenerationStats>& stats) {
  std::string out = "generation,mean_fitness,var_fitness,max_fitness,best_member_id\n";
  for (const GenerationStats& s : stats) {
    out += std::to_string(s.generation);
    out.push_back(',');
    out += format_double(s.mean_fitness);
    out.push_back(',');
    out += format_double(s.var_fitness);
    out.push_back(',');
    out += format_double(s.max_fitness);
    out.push_back(',');
    out += std::to_string(s.best_member);
    out.push_back('\n');
  }
  return out;
}

std::string stats_plot_script(const std::string& csv_name) {
  std::string out;
  out += "set datafile separator ','\n";
  out += "set key autotitle columnhead\n";
  out += "set xlabel 'generation'\n";
  out += "set ylabel 'fitness'\n";
  out += "plot '" + csv_name + "' using 1:2 with lines title 'mean', \\\n";
  out += "     '" + csv_name + "' using 1:4 with lines title 'max'\n";
  return out;
}

std::string fitness_report_json_text(const FitnessReport& report) {
  ordered_json j;
  j["schema_version"] = 1;
  j["fitness"] = report.fitness;
  j["all_solved"] = report.all_solved;
  j["worst_norm_Nm"] = report.worst_norm;
  if (report.worst_case >= 0) {
    const CaseResult& worst = report.cases[report.worst_case];
    j["worst_case"] = {{"human", worst.human_index},
                       {"load", worst.load_index},
                       {"height_index", report.worst_height}};
    j["worst_torques_Nm"] = vec_json(report.worst_torques);
  }
  j["cases"] = ordered_json::array();
  for (const CaseResult& cr : report.cases) {
    ordered_json c;
    c["human"] = cr.human_index;
    c["load"] = cr.load_index;
    c["status"] = to_string(cr.status);
    ordered_json norms = ordered_json::array();
    for (double n : cr.height_norms) norms.push_back(n);
    c["height_norms_Nm"] = std::move(norms);
    ordered_json torques = ordered_json::array();
    for (const Eigen::VectorXd& tau : cr.height_torques) torques.push_back(vec_json(tau));
    c["height_torques_Nm"] = std::move(torques);
    j["cases"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

std::string solution_dump_json_text(const PostureSolution& solution, int human_index,
                                    int load_index, const std::vector<double>& heights) {
  ordered_json j;
  j["schema_version"] = 1;
  j["human_index"] = human_index;
  j["load_index"] = load_index;
  j["status"] = to_string(solution.status);
  j["objective"] = solution.objective;
  j["max_violation"] = solution.max_violation;
  j["heights"] = ordered_json::array();
  for (std::size_t k = 0; k < solution.heights.size(); ++k) {
    const HeightPosture& hp = solution.heights[k];
    ordered_json h;
    h["height_m"] = k < heights.size() ? heights[k] : 0.0;
    h["human"] = state_json(hp.human);
    h["robot"] = state_json(hp.robot);
    h["load"] = state_json(hp.load);
    h["torques_Nm"] = vec_json(hp.torques);
    ordered_json wrenches = ordered_json::array();
    for (int c = 0; 6 * (c + 1) <= hp.wrenches.size(); ++c)
      wrenches.push_back(vec_json(hp.wrenches.segment<6>(6 * c)));
    h["wrenches"] = std::move(wrenches);
    j["heights"].push_back(std::move(h));
  }
  return j.dump(2) + "\n";
}

std::string run_manifest_json_text(const RunManifest& manifest) {
  ordered_json j;
  j["schema_version"] = 1;
  j["tool"] = "colift";
  j["version"] = kVersion;
  j["command"] = manifest.command;
  j["scenario"] = manifest.scenario_file;
  char hex[19];
  std::snprintf(hex, sizeof hex, "0x%016llx",
                static_cast<unsigned long long>(manifest.scenario_hash));
  j["scenario_fnv1a"] = hex;
  j["seed"] = manifest.seed;
  j["threads"] = manifest.threads;
  j["solver"] = {{"tol_feas", manifest.solver.tol_feas},
                 {"tol_stat", manifest.solver.tol_stat},
                 {"max_iterations", manifest.solver.max_iterations},
                 {"max_restarts", manifest.solver.max_restarts}};
  j["evolution"] = {{"population", manifest.evolution.population},
                    {"tournament_k", manifest.evolution.tournament_k},
                    {"elitism", manifest.evolution.elitism},
                    {"max_generations", manifest.evolution.max_generations},
                    {"mutation_fraction", manifest.evolution.mutation_fraction},
                    {"stop_improvement", manifest.evolution.stop_improvement},
                    {"crossover_kind", manifest.evolution.crossover_kind}};
  j["result"] = {{"best_fitness", manifest.best_fitness},
                 {"generations", manifest.generations},
                 {"evaluations", manifest.evaluations},
                 {"stopped_early", manifest.stopped_early}};
  return j.dump(2) + "\n";
}

ComparisonReport compare_designs(const Scenario& scenario, const FitnessReport& report_a,
                                 const FitnessReport& report_b, const std::string& label_a,
                                 const std::string& label_b) {
  check_comparable(scenario, report_a, label_a);
  check_comparable(scenario, report_b, label_b);

  int n2 = scenario.robot.num_joints();
  int n_k = static_cast<int>(scenario.heights.size());
  ComparisonReport out;

  out.robot_torques_csv = "design,height_m,mean_abs_Nm,var_abs_Nm,max_abs_Nm,norm_Nm\n";
  for (const auto& [label, report] :
       {std::pair<const std::string&, const FitnessReport&>{label_a, report_a},
        {label_b, report_b}}) {
    for (int k = 0; k < n_k; ++k) {
      TorquePool pool = pool_robot_torques(report, k, n2);
      out.robot_torques_csv += label + "," + format_double(scenario.heights[k]) + "," +
                               format_double(pool.mean) + "," + format_double(pool.var) + "," +
                               format_double(pool.max) + "," + format_double(pool.norm) + "\n";
    }
  }

  std::string height_columns;
  for (int k = 0; k < n_k; ++k)
    height_columns += ",tau_at_" + format_double(scenario.heights[k]) + "m_Nm";

  out.human_torques_csv = "design,load,joint" + height_columns + "\n";
  for (const auto& [label, report] :
       {std::pair<const std::string&, const FitnessReport&>{label_a, report_a},
        {label_b, report_b}}) {
    for (std::size_t o = 0; o < scenario.loads.size(); ++o) {
      for (const std::string& joint : scenario.report_joints) {
        out.human_torques_csv += label + "," + scenario.loads[o].name + "," + joint;
        for (int k = 0; k < n_k; ++k) {
          out.human_torques_csv +=
              "," + format_double(named_joint_torque(scenario, report, joint,
                                                     static_cast<int>(o), k));
        }
        out.human_torques_csv += "\n";
      }
    }
  }

  std::string diff_columns;
  for (int k = 0; k < n_k; ++k)
    diff_columns += ",delta_at_" + format_double(scenario.heights[k]) + "m_Nm";
  out.back_torque_diff_csv = "load,joint" + diff_columns + "\n";
  for (std::size_t o = 0; o < scenario.loads.size(); ++o) {
    for (const std::string& joint : scenario.report_joints) {
      out.back_torque_diff_csv += scenario.loads[o].name + "," + joint;
      for (int k = 0; k < n_k; ++k) {
        double a = named_joint_torque(scenario, report_a, joint, static_cast<int>(o), k);
        double b = named_joint_torque(scenario, report_b, joint, static_cast<int>(o), k);
        out.back_torque_diff_csv += "," + format_double(a - b);
      }
      out.back_torque_diff_csv += "\n";
    }
  }

  // Relative change of summed per-height norms, (|A| - |B|) / |B|.
  double robot_a = 0.0, robot_b = 0.0, human_a = 0.0, human_b = 0.0;
  for (int k = 0; k < n_k; ++k) {
    robot_a += pool_robot_torques(report_a, k, n2).norm;
    robot_b += pool_robot_torques(report_b, k, n2).norm;
    human_a += human_block_norm(report_a, k, n2);
    human_b += human_block_norm(report_b, k, n2);
  }
  out.summary_csv = "metric,value_percent\n";
  out.summary_csv += "robot_torque_norm_change," +
                     format_double(robot_b > 0.0 ? (robot_a - robot_b) / robot_b * 100.0 : 0.0) +
                     "\n";
  out.summary_csv += "human_torque_norm_change," +
                     format_double(human_b > 0.0 ? (human_a - human_b) / human_b * 100.0 : 0.0) +
                     "\n";
  return out;
}

}  // namespace colift
