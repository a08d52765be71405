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

#ifndef COLIFT_EVOLUTION_HPP_
#define COLIFT_EVOLUTION_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "colift/model.hpp"
#include "colift/posture_problem.hpp"
#include "colift/rng.hpp"

namespace colift {

// Domains of the design genes: continuous length multipliers in a closed
// interval, densities drawn from a material palette, motors from a catalog.
struct GeneDomains {
  int num_lengths = 0;
  int num_densities = 0;
  int num_motors = 0;
  double length_min = 0.5;
  double length_max = 2.0;
  std::vector<double> density_set;
  std::vector<std::string> motor_set;

  int gene_count() const { return num_lengths + num_densities + num_motors; }
  bool feasible(const HardwareParams& params) const;
  HardwareParams random(Rng& rng) const;
};

// One (human, load) lifting case. `build` poses the multi-height NLP for a
// candidate design; `init` is the fixed placement guess for that pairing.
struct PostureCase {
  std::function<StaticPostureProblem(const HardwareParams&)> build;
  PostureInit init;
  int human_index = 0;
  int load_index = 0;
};

struct FitnessContext {
  std::vector<PostureCase> cases;
  double fitness_scale = 100.0;  // W_f
  PostureSolverOptions solver;
  std::uint64_t seed = 0;  // run seed; per-case solver seeds derive from it
  bool keep_solutions = false;
};

struct CaseResult {
  int human_index = 0;
  int load_index = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
  // Stacked [robot motors; human joints] torque vector per load height.
  std::vector<Eigen::VectorXd> height_torques;
  std::vector<double> height_norms;
  double seconds = 0.0;
  PostureSolution solution;  // full record, kept only on request
};

struct FitnessReport {
  double fitness = 0.0;
  bool all_solved = false;
  Eigen::VectorXd worst_torques;
  double worst_norm = 0.0;
  int worst_case = -1;    // index into cases
  int worst_height = -1;  // height index within that case
  std::vector<CaseResult> cases;
  double wall_seconds = 0.0;
};

struct EvolutionConfig {
  int population = 20;
  int tournament_k = 3;
  int elitism = 1;
  int max_generations = 100;
  double mutation_fraction = 0.1;
  double stop_improvement = 0.05;
  std::string crossover_kind = "uniform";
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<HardwareParams> warm_start;
};

struct GenerationStats {
  int generation = 0;
  double mean_fitness = 0.0;
  double var_fitness = 0.0;  // population variance (divide by n)
  double max_fitness = 0.0;
  int best_member = 0;
};

struct EvolutionResult {
  HardwareParams best;
  FitnessReport best_report;
  double best_fitness = 0.0;
  std::vector<GenerationStats> stats;
  int evaluations = 0;  // distinct designs actually solved (cache misses)
  bool stopped_early = false;
};

// Solves every case of `context` for one design. Fitness is
// fitness_scale / ||worst torque vector||; any unsolved case zeroes it.
FitnessReport evaluate_fitness(const HardwareParams& params, const FitnessContext& context);

// Uniformly samples k distinct members and returns the index of the fittest;
// ties go to the lowest index. Fitness entries must all be evaluated (finite).
int tournament_select(const std::vector<double>& fitness, int k, Rng& rng);

// Uniform crossover: each gene independently from either parent.
HardwareParams crossover(const HardwareParams& parent_a, const HardwareParams& parent_b,
                         Rng& rng);

// Resamples ceil(fraction * gene_count) genes, chosen without replacement,
// each uniformly over its domain.
HardwareParams mutate(const HardwareParams& params, const GeneDomains& domains,
                      double fraction, Rng& rng);

// Stop once the best fitness has improved on the generation-0 best by the
// configured fraction. A non-positive baseline can never trigger it.
bool stop_rule_triggered(double generation0_best, double current_best, double improvement);

// Canonical text key of a design, used for caching and solver seeding.
std::string gene_key(const HardwareParams& params);

// Solver seed of one (design, case) pair. A pure function of the genes and
// indices, so scheduling order cannot change any solve.
std::uint64_t case_solver_seed(std::uint64_t run_seed, const HardwareParams& params,
                               int human_index, int load_index);

EvolutionResult evolve(const EvolutionConfig& config, const GeneDomains& domains,
                       const FitnessContext& context);

}  // namespace colift

#endif  // COLIFT_EVOLUTION_HPP_
