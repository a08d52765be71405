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

#include "colift/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "colift/errors.hpp"

namespace colift {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void append_double(std::string* out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out->append(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

bool GeneDomains::feasible(const HardwareParams& params) const {
  if (static_cast<int>(params.length_multipliers.size()) != num_lengths ||
      static_cast<int>(params.densities.size()) != num_densities ||
      static_cast<int>(params.motor_ids.size()) != num_motors) {
    return false;
  }
  for (double lm : params.length_multipliers) {
    if (!(lm >= length_min && lm <= length_max)) return false;
  }
  for (double rho : params.densities) {
    if (std::find(density_set.begin(), density_set.end(), rho) == density_set.end())
      return false;
  }
  for (const std::string& id : params.motor_ids) {
    if (std::find(motor_set.begin(), motor_set.end(), id) == motor_set.end()) return false;
  }
  return true;
}

HardwareParams GeneDomains::random(Rng& rng) const {
  HardwareParams p;
  p.length_multipliers.resize(num_lengths);
  p.densities.resize(num_densities);
  p.motor_ids.resize(num_motors);
  for (int i = 0; i < num_lengths; ++i)
    p.length_multipliers[i] = rng.uniform(length_min, length_max);
  for (int i = 0; i < num_densities; ++i)
    p.densities[i] = density_set[rng.next_int(static_cast<int>(density_set.size()))];
  for (int i = 0; i < num_motors; ++i)
    p.motor_ids[i] = motor_set[rng.next_int(static_cast<int>(motor_set.size()))];
  return p;
}

std::string gene_key(const HardwareParams& params) {
  std::string key;
  key.reserve(32 * (params.length_multipliers.size() + params.densities.size()) + 8);
  for (double lm : params.length_multipliers) {
    append_double(&key, lm);
    key.push_back(',');
  }
  key.push_back('|');
  for (double rho : params.densities) {
    append_double(&key, rho);
    key.push_back(',');
  }
  key.push_back('|');
  for (const std::string& id : params.motor_ids) {
    key += id;
    key.push_back(',');
  }
  return key;
}

std::uint64_t case_solver_seed(std::uint64_t run_seed, const HardwareParams& params,
                               int human_index, int load_index) {
  return Rng::derive_seed(run_seed ^ fnv1a(gene_key(params)),
                          static_cast<std::uint64_t>(human_index),
                          static_cast<std::uint64_t>(load_index));
}

FitnessReport evaluate_fitness(const HardwareParams& params, const FitnessContext& context) {
  if (context.cases.empty()) throw ContractError("evaluate_fitness: empty case set");
  auto start = std::chrono::steady_clock::now();

  FitnessReport report;
  report.all_solved = true;

  for (std::size_t c = 0; c < context.cases.size(); ++c) {
    const PostureCase& pc = context.cases[c];
    auto case_start = std::chrono::steady_clock::now();

    CaseResult cr;
    cr.human_index = pc.human_index;
    cr.load_index = pc.load_index;

    StaticPostureProblem problem = pc.build(params);
    PostureSolverOptions opts = context.solver;
    // A fixed per-(design, case) stream keeps restart perturbations, and
    // therefore every downstream number, independent of scheduling order.
    opts.seed = case_solver_seed(context.seed, params, pc.human_index, pc.load_index);
    PostureSolution sol = solve_posture(problem, pc.init, opts);
    cr.status = sol.status;

    if (sol.status == SolveStatus::kSolved) {
      for (std::size_t k = 0; k < sol.heights.size(); ++k) {
        Eigen::VectorXd tau = sol.heights[k].torques;
        double norm = tau.norm();
        cr.height_torques.push_back(std::move(tau));
        cr.height_norms.push_back(norm);
        if (norm > report.worst_norm) {
          report.worst_norm = norm;
          report.worst_torques = cr.height_torques.back();
          report.worst_case = static_cast<int>(c);
          report.worst_height = static_cast<int>(k);
        }
      }
    } else {
      report.all_solved = false;
    }
    if (context.keep_solutions) cr.solution = std::move(sol);
    cr.seconds = elapsed_seconds(case_start);
    report.cases.push_back(std::move(cr));
  }

  if (report.all_solved && report.worst_norm > 0.0)
    report.fitness = context.fitness_scale / report.worst_norm;
  report.wall_seconds = elapsed_seconds(start);
  return report;
}

int tournament_select(const std::vector<double>& fitness, int k, Rng& rng) {
  int n = static_cast<int>(fitness.size());
  if (n == 0 || k < 1 || k > n) throw ContractError("tournament_select: bad k or empty pool");
  for (double f : fitness) {
    if (!std::isfinite(f)) throw ContractError("tournament_select: unevaluated fitness");
  }
  // Partial Fisher-Yates over an index pool: k distinct entrants.
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  int best = -1;
  for (int round = 0; round < k; ++round) {
    int j = round + rng.next_int(n - round);
    std::swap(pool[round], pool[j]);
    int cand = pool[round];
    if (best < 0 || fitness[cand] > fitness[best] ||
        (fitness[cand] == fitness[best] && cand < best)) {
      best = cand;
    }
  }
  return best;
}

HardwareParams crossover(const HardwareParams& parent_a, const HardwareParams& parent_b,
                         Rng& rng) {
  if (parent_a.length_multipliers.size() != parent_b.length_multipliers.size() ||
      parent_a.densities.size() != parent_b.densities.size() ||
      parent_a.motor_ids.size() != parent_b.motor_ids.size()) {
    throw ContractError("crossover: gene layout mismatch");
  }
  HardwareParams child = parent_a;
  for (std::size_t i = 0; i < child.length_multipliers.size(); ++i) {
    if (rng.next_int(2)) child.length_multipliers[i] = parent_b.length_multipliers[i];
  }
  for (std::size_t i = 0; i < child.densities.size(); ++i) {
    if (rng.next_int(2)) child.densities[i] = parent_b.densities[i];
  }
  for (std::size_t i = 0; i < child.motor_ids.size(); ++i) {
    if (rng.next_int(2)) child.motor_ids[i] = parent_b.motor_ids[i];
  }
  return child;
}

HardwareParams mutate(const HardwareParams& params, const GeneDomains& domains,
                      double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ContractError("mutate: fraction out of range");
  HardwareParams out = params;
  int total = domains.gene_count();
  int count = static_cast<int>(std::ceil(fraction * total));
  if (count == 0) return out;

  std::vector<int> pool(total);
  for (int i = 0; i < total; ++i) pool[i] = i;
  for (int round = 0; round < count; ++round) {
    int j = round + rng.next_int(total - round);
    std::swap(pool[round], pool[j]);
    int gene = pool[round];
    if (gene < domains.num_lengths) {
      out.length_multipliers[gene] = rng.uniform(domains.length_min, domains.length_max);
    } else if (gene < domains.num_lengths + domains.num_densities) {
      int i = gene - domains.num_lengths;
      out.densities[i] = domains.density_set[rng.next_int(
          static_cast<int>(domains.density_set.size()))];
    } else {
      int i = gene - domains.num_lengths - domains.num_densities;
      out.motor_ids[i] =
          domains.motor_set[rng.next_int(static_cast<int>(domains.motor_set.size()))];
    }
  }
  return out;
}

bool stop_rule_triggered(double generation0_best, double current_best, double improvement) {
  if (generation0_best <= 0.0) return false;
  return current_best >= (1.0 + improvement) * generation0_best;
}

EvolutionResult evolve(const EvolutionConfig& config, const GeneDomains& domains,
                       const FitnessContext& context) {
  if (config.population < 1) throw ContractError("evolve: empty population");
  if (config.tournament_k < 1 || config.tournament_k > config.population)
    throw ContractError("evolve: tournament k out of range");
  if (config.elitism < 0 || config.elitism > config.population)
    throw ContractError("evolve: elitism out of range");
  if (config.crossover_kind != "uniform")
    throw ContractError("evolve: unknown crossover kind '" + config.crossover_kind + "'");
  if (domains.num_densities > 0 && domains.density_set.empty())
    throw ContractError("evolve: density genes but empty material set");
  if (domains.num_motors > 0 && domains.motor_set.empty())
    throw ContractError("evolve: motor genes but empty catalog set");

  EvolutionResult result;
  std::unordered_map<std::string, FitnessReport> cache;
  std::mutex cache_mutex;

  // Initial population: warm starts first, random fill after.
  std::vector<HardwareParams> members;
  for (const HardwareParams& w : config.warm_start) {
    if (static_cast<int>(members.size()) == config.population) break;
    if (!domains.feasible(w)) throw ContractError("evolve: infeasible warm-start design");
    members.push_back(w);
  }
  {
    Rng init_rng(Rng::derive_seed(config.seed, 0xf111, 0));
    while (static_cast<int>(members.size()) < config.population)
      members.push_back(domains.random(init_rng));
  }

  double generation0_best = 0.0;
  int threads = std::max(1, config.threads);

  for (int gen = 0; gen < config.max_generations; ++gen) {
    // Evaluate members not seen before; identical designs share one solve.
    std::vector<std::string> keys(members.size());
    std::vector<const HardwareParams*> pending;
    std::vector<std::string> pending_keys;
    for (std::size_t m = 0; m < members.size(); ++m) {
      keys[m] = gene_key(members[m]);
      if (cache.count(keys[m]) ||
          std::find(pending_keys.begin(), pending_keys.end(), keys[m]) != pending_keys.end())
        continue;
      pending.push_back(&members[m]);
      pending_keys.push_back(keys[m]);
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= pending.size()) return;
        FitnessReport rep = evaluate_fitness(*pending[i], context);
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(pending_keys[i], std::move(rep));
      }
    };
    if (threads == 1 || pending.size() <= 1) {
      worker();
    } else {
      std::vector<std::thread> crew;
      int n_workers = std::min<int>(threads, static_cast<int>(pending.size()));
      crew.reserve(n_workers);
      for (int t = 0; t < n_workers; ++t) crew.emplace_back(worker);
      for (std::thread& t : crew) t.join();
    }
    result.evaluations += static_cast<int>(pending.size());

    std::vector<double> fitness(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) fitness[m] = cache.at(keys[m]).fitness;

    GenerationStats stats;
    stats.generation = gen;
    double sum = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      sum += fitness[m];
      if (fitness[m] > stats.max_fitness) {
        stats.max_fitness = fitness[m];
        stats.best_member = static_cast<int>(m);
      }
    }
    stats.mean_fitness = sum / static_cast<double>(members.size());
    double sq = 0.0;
    for (double f : fitness) sq += (f - stats.mean_fitness) * (f - stats.mean_fitness);
    stats.var_fitness = sq / static_cast<double>(members.size());
    result.stats.push_back(stats);

    if (gen == 0) generation0_best = stats.max_fitness;
    if (stats.max_fitness > result.best_fitness || result.stats.size() == 1) {
      result.best_fitness = stats.max_fitness;
      result.best = members[stats.best_member];
      result.best_report = cache.at(keys[stats.best_member]);
    }

    if (stop_rule_triggered(generation0_best, stats.max_fitness, config.stop_improvement)) {
      result.stopped_early = true;
      break;
    }
    if (gen + 1 == config.max_generations) break;

    // Breed the next generation: elites survive unchanged, the rest come
    // from tournament -> uniform crossover -> mutation.
    std::vector<int> order(members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] > fitness[b]; });

    std::vector<HardwareParams> next_members;
    next_members.reserve(members.size());
    for (int e = 0; e < config.elitism; ++e) next_members.push_back(members[order[e]]);
    for (int m = config.elitism; m < config.population; ++m) {
      Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(gen + 1),
                               static_cast<std::uint64_t>(m)));
      int pa = tournament_select(fitness, config.tournament_k, rng);
      int pb = tournament_select(fitness, config.tournament_k, rng);
      HardwareParams child = crossover(members[pa], members[pb], rng);
      next_members.push_back(mutate(child, domains, config.mutation_fraction, rng));
    }
    members = std::move(next_members);
  }

  return result;
}

}  // namespace colift
