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

#ifndef COLIFT_REPORTS_HPP_
#define COLIFT_REPORTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "colift/evolution.hpp"
#include "colift/posture_problem.hpp"
#include "colift/scenario.hpp"

namespace colift {

// Shortest decimal text that parses back to exactly the same double. All
// emitted CSV/JSON numbers go through this so artifacts are reproducible
// byte for byte.
std::string format_double(double v);

// FNV-1a over raw bytes; the manifest records it for config files.
std::uint64_t content_hash(const std::string& bytes);

// Fitness trace, one row per generation:
// generation,mean_fitness,var_fitness,max_fitness,best_member_id
std::string stats_csv_text(const std::vector<GenerationStats>& stats);

// Companion gnuplot script for the fitness trace.
std::string stats_plot_script(const std::string& csv_name);

// Machine-readable evaluation summary (no wall-clock fields; artifacts must
// replay byte-identically).
std::string fitness_report_json_text(const FitnessReport& report);

// Full posture record of one (human, load) case: per-height q, torques and
// contact wrenches plus solver status.
std::string solution_dump_json_text(const PostureSolution& solution, int human_index,
                                    int load_index, const std::vector<double>& heights);

struct RunManifest {
  std::string command;
  std::string scenario_file;
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  PostureSolverOptions solver;
  EvolutionConfig evolution;  // resolved config actually used
  double best_fitness = 0.0;
  int generations = 0;
  int evaluations = 0;
  bool stopped_early = false;
};

std::string run_manifest_json_text(const RunManifest& manifest);

// Comparison artifacts for two designs evaluated on the same scenario
// (same case order). CSV layouts are pinned by golden tests.
struct ComparisonReport {
  std::string robot_torques_csv;    // per design x height: |tau| stats + norm
  std::string human_torques_csv;    // named human joints per load x height
  std::string back_torque_diff_csv; // signed A-B differences, heights as columns
  std::string summary_csv;          // relative norm changes in percent
};

ComparisonReport compare_designs(const Scenario& scenario, const FitnessReport& report_a,
                                 const FitnessReport& report_b, const std::string& label_a,
                                 const std::string& label_b);

}  // namespace colift

#endif  // COLIFT_REPORTS_HPP_
