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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "colift/errors.hpp"
#include "colift/evolution.hpp"
#include "colift/model_io.hpp"
#include "colift/reports.hpp"
#include "colift/scenario.hpp"
#include "colift/version.hpp"

namespace fs = std::filesystem;
using namespace colift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<double> solver_tol;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--seed", flags->seed, "Run seed (overrides the scenario's)");
  cmd->add_option("--out", flags->out, "Output directory (overrides the scenario's)");
  cmd->add_option("--threads", flags->threads, "Worker threads for fitness evaluation");
  cmd->add_option("--solver-tol", flags->solver_tol,
                  "Feasibility and stationarity tolerance of the posture solver");
}

void apply_overrides(Scenario* scenario, const CommonFlags& flags) {
  if (flags.seed) scenario->evolution.seed = *flags.seed;
  if (flags.out) scenario->output_dir = *flags.out;
  if (flags.threads) scenario->evolution.threads = *flags.threads;
  if (flags.solver_tol) {
    scenario->solver.tol_feas = *flags.solver_tol;
    scenario->solver.tol_stat = *flags.solver_tol;
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void write_solution_dumps(const fs::path& dir, const Scenario& scenario,
                          const FitnessReport& report) {
  fs::create_directories(dir);
  for (const CaseResult& cr : report.cases) {
    fs::path file = dir / ("human" + std::to_string(cr.human_index) + "_load" +
                           std::to_string(cr.load_index) + ".json");
    write_file(file, solution_dump_json_text(cr.solution, cr.human_index, cr.load_index,
                                             scenario.heights));
  }
}

int cmd_validate(const std::string& model_file) {
  KinematicModel model = load_model(model_file);
  DiagnosticList diags = model.validate();
  for (const Diagnostic& d : diags)
    std::fprintf(stderr, "[%s] %s\n", d.code.c_str(), d.message.c_str());
  if (!diags.empty()) return kExitValidation;
  std::printf("%s: ok (%d links, %d joints, %zu frames)\n", model.name.c_str(),
              model.num_links(), model.num_joints(), model.frames.size());
  return kExitOk;
}

int cmd_evolve(const std::string& scenario_file, const CommonFlags& flags) {
  Scenario scenario = load_scenario(scenario_file);
  apply_overrides(&scenario, flags);

  FitnessContext context = make_fitness_context(scenario);
  EvolutionResult result = evolve(scenario.evolution, scenario.domains, context);

  fs::path out_dir(scenario.output_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "stats.csv", stats_csv_text(result.stats));
  write_file(out_dir / "stats.gp", stats_plot_script("stats.csv"));
  save_model(apply_params(scenario.robot, result.best), out_dir / "best_design.json");

  // Re-evaluate the winner with full records; identical seeding reproduces
  // the cached numbers exactly.
  context.keep_solutions = true;
  FitnessReport best_report = evaluate_fitness(result.best, context);
  write_file(out_dir / "fitness_report.json", fitness_report_json_text(best_report));
  write_solution_dumps(out_dir / "solutions", scenario, best_report);

  RunManifest manifest;
  manifest.command = "evolve";
  manifest.scenario_file = scenario_file;
  manifest.scenario_hash = content_hash(slurp(scenario_file));
  manifest.seed = scenario.evolution.seed;
  manifest.threads = scenario.evolution.threads;
  manifest.solver = scenario.solver;
  manifest.evolution = scenario.evolution;
  manifest.best_fitness = result.best_fitness;
  manifest.generations = static_cast<int>(result.stats.size());
  manifest.evaluations = result.evaluations;
  manifest.stopped_early = result.stopped_early;
  write_file(out_dir / "manifest.json", run_manifest_json_text(manifest));

  std::printf("evolve: %zu generations, %d designs solved, best fitness %s%s\n",
              result.stats.size(), result.evaluations,
              format_double(result.best_fitness).c_str(),
              result.stopped_early ? " (stop rule hit)" : "");
  std::printf("artifacts in %s\n", out_dir.string().c_str());
  return kExitOk;
}

int cmd_evaluate(const std::string& design_file, const std::string& scenario_file,
                 const CommonFlags& flags) {
  Scenario scenario = load_scenario(scenario_file);
  apply_overrides(&scenario, flags);

  KinematicModel design = load_model(design_file);
  HardwareParams params = design.nominal_params();

  FitnessContext context = make_fitness_context(scenario);
  context.keep_solutions = true;
  FitnessReport report = evaluate_fitness(params, context);

  fs::path out_dir(scenario.output_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "fitness_report.json", fitness_report_json_text(report));
  write_solution_dumps(out_dir / "solutions", scenario, report);

  std::printf("evaluate: fitness %s, %s\n", format_double(report.fitness).c_str(),
              report.all_solved ? "all cases solved" : "unsolved cases present");
  for (const CaseResult& cr : report.cases) {
    std::printf("  human %d x load %d: %s\n", cr.human_index, cr.load_index,
                to_string(cr.status));
  }
  std::printf("artifacts in %s\n", out_dir.string().c_str());
  return kExitOk;
}

int cmd_compare(const std::string& design_a, const std::string& design_b,
                const std::string& scenario_file, const std::string& human_override,
                const std::string& load_override, const CommonFlags& flags) {
  Scenario scenario = load_scenario(scenario_file);
  apply_overrides(&scenario, flags);

  if (!human_override.empty()) {
    KinematicModel human = load_model(human_override);
    DiagnosticList diags = human.validate();
    if (!diags.empty())
      throw ModelError("override human model fails validation: " + diags.front().message);
    AgentPlacement placement = scenario.human_placements.front();
    placement.joints.resize(0);  // zero guess; joint counts may differ
    scenario.humans.assign(1, human);
    scenario.human_placements.assign(1, placement);
  }
  if (!load_override.empty()) {
    auto it = std::find_if(scenario.loads.begin(), scenario.loads.end(),
                           [&](const LoadDef& l) { return l.name == load_override; });
    if (it == scenario.loads.end())
      throw ModelError("scenario has no load named '" + load_override + "'");
    LoadDef keep = *it;
    scenario.loads.assign(1, keep);
  }

  HardwareParams params_a = load_model(design_a).nominal_params();
  HardwareParams params_b = load_model(design_b).nominal_params();

  FitnessContext context = make_fitness_context(scenario);
  FitnessReport report_a = evaluate_fitness(params_a, context);
  FitnessReport report_b = evaluate_fitness(params_b, context);
  if (!report_a.all_solved || !report_b.all_solved) {
    std::fprintf(stderr, "compare: unsolved cases (A %s, B %s)\n",
                 report_a.all_solved ? "ok" : "failed", report_b.all_solved ? "ok" : "failed");
    return kExitRuntime;
  }

  std::string label_a = fs::path(design_a).stem().string();
  std::string label_b = fs::path(design_b).stem().string();
  if (label_a == label_b) label_b += "_b";
  ComparisonReport report = compare_designs(scenario, report_a, report_b, label_a, label_b);

  fs::path out_dir(scenario.output_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "robot_torques.csv", report.robot_torques_csv);
  write_file(out_dir / "human_torques.csv", report.human_torques_csv);
  write_file(out_dir / "back_torque_diff.csv", report.back_torque_diff_csv);
  write_file(out_dir / "summary.csv", report.summary_csv);

  std::printf("compare: %s vs %s\n%s", label_a.c_str(), label_b.c_str(),
              report.summary_csv.c_str());
  std::printf("artifacts in %s\n", out_dir.string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative-lifting hardware co-design toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string model_file, design_file, design_file_b, scenario_file;
  std::string human_override, load_override;
  CommonFlags flags;

  CLI::App* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("model", model_file, "Model file (schema v1)")->required();

  CLI::App* evolve_cmd = app.add_subcommand("evolve", "Run the genetic design search");
  evolve_cmd->add_option("scenario", scenario_file, "Scenario file (schema v1)")->required();
  add_common_flags(evolve_cmd, &flags);

  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Score one design on a scenario");
  evaluate_cmd->add_option("design", design_file, "Design file (model schema)")->required();
  evaluate_cmd->add_option("scenario", scenario_file, "Scenario file")->required();
  add_common_flags(evaluate_cmd, &flags);

  CLI::App* compare_cmd = app.add_subcommand("compare", "Compare two designs on a scenario");
  compare_cmd->add_option("design_a", design_file, "Design A (model schema)")->required();
  compare_cmd->add_option("design_b", design_file_b, "Design B (model schema)")->required();
  compare_cmd->add_option("scenario", scenario_file, "Scenario file")->required();
  compare_cmd->add_option("--human", human_override, "Evaluate with this human model instead");
  compare_cmd->add_option("--load", load_override, "Restrict to the named load");
  add_common_flags(compare_cmd, &flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(model_file);
    if (evolve_cmd->parsed()) return cmd_evolve(scenario_file, flags);
    if (evaluate_cmd->parsed()) return cmd_evaluate(design_file, scenario_file, flags);
    if (compare_cmd->parsed())
      return cmd_compare(design_file, design_file_b, scenario_file, human_override,
                         load_override, flags);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
