#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "morpho/fitness.hpp"
#include "morpho/genome.hpp"
#include "morpho/rng.hpp"

namespace morpho {

// Steady-state GA parameters. Defaults follow the graph-targeting setup;
// experiment configs override per family.
struct GaConfig {
  int population = 2000;
  int tournament_size = 7;
  int parents_per_gen = 300;
  int replace_per_gen = 200;
  int elites = 10;
  int max_generations = 1000;
  double base_mutation = 0.4;        // p_mut
  double mu_min = 1.0;
  double mu_max = 2.5;
  std::array<double, 5> mutation_type_probs{0.15, 0.15, 0.45, 0.10, 0.15};
  double radical_prob = 0.05;
  double success_fitness_threshold = 1.0;
  double convergence_ratio_stop = 0.95;  // stop when f_avg >= ratio * f_best
};

// Empty result means valid.
std::optional<std::string> ga_config_error(const GaConfig& ga);

enum class Termination { Threshold, Converged, Budget };
std::string to_string(Termination t);

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double mu = 0.0;          // adaptive mutation multiplier for this generation
  uint64_t cache_hits = 0;  // cumulative evaluator cache hits
  double wall_seconds = 0.0;
};

struct EvolutionResult {
  Genome best;
  double best_fitness = 0.0;
  int generations = 0;  // variation rounds executed
  Termination reason = Termination::Budget;
  std::vector<GenerationStats> stats;  // one entry per generation, incl. 0
};

// mu = mu_min + (mu_max - mu_min) * rho with rho = f_avg / f_best (0 when
// f_best is 0), so mutation pressure rises as the population converges.
double adaptive_multiplier(double f_avg, double f_best, double mu_min,
                           double mu_max);

// Samples tournament_size indices uniformly with replacement and returns the
// best one; fitness ties resolve to the lowest index.
int tournament_select(const std::vector<double>& fitness, int tournament_size,
                      Rng& rng);

// Full run: evaluate (parallel, cached), check termination, tournament
// selection, crossover + mutation of replace_per_gen offspring, replacement
// of the worst. All random decisions come from one stream seeded with
// `seed`, so results do not depend on n_threads. The optional callback fires
// after each generation's evaluation wave.
using GenerationCallback = std::function<void(const GenerationStats&)>;
EvolutionResult evolve(const GaConfig& ga, const GenomeBounds& bounds,
                       const Objective& objective, uint64_t seed,
                       int n_threads = 1,
                       const GenerationCallback& on_generation = {});

}  // namespace morpho
