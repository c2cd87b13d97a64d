#include "morpho/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "morpho/errors.hpp"
#include "morpho/parallel.hpp"

namespace morpho {

std::optional<std::string> ga_config_error(const GaConfig& ga) {
  if (ga.population < 1) return "population must be positive";
  if (ga.tournament_size < 1 || ga.tournament_size > ga.population)
    return "tournament_size must be in [1, population]";
  if (ga.parents_per_gen < 2) return "parents_per_gen must be at least 2";
  if (ga.replace_per_gen < 0) return "replace_per_gen must be non-negative";
  if (ga.elites < 0) return "elites must be non-negative";
  if (ga.elites + ga.replace_per_gen > ga.population)
    return "elites + replace_per_gen must not exceed population";
  if (ga.max_generations < 0) return "max_generations must be non-negative";
  if (ga.base_mutation < 0.0 || ga.base_mutation > 1.0)
    return "base_mutation must be in [0, 1]";
  if (ga.mu_min > ga.mu_max) return "mu_min must not exceed mu_max";
  double prob_sum = 0.0;
  for (double p : ga.mutation_type_probs) {
    if (p < 0.0) return "mutation type probabilities must be non-negative";
    prob_sum += p;
  }
  if (std::abs(prob_sum - 1.0) > 1e-9)
    return "mutation type probabilities must sum to 1";
  if (ga.radical_prob < 0.0 || ga.radical_prob > 1.0)
    return "radical_prob must be in [0, 1]";
  return std::nullopt;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Threshold: return "threshold";
    case Termination::Converged: return "converged";
    default: return "budget";
  }
}

double adaptive_multiplier(double f_avg, double f_best, double mu_min,
                           double mu_max) {
  const double rho = f_best > 0.0 ? f_avg / f_best : 0.0;
  return mu_min + (mu_max - mu_min) * rho;
}

int tournament_select(const std::vector<double>& fitness, int tournament_size,
                      Rng& rng) {
  const auto n = static_cast<int64_t>(fitness.size());
  // Ties keep the earliest sampled candidate, so an all-tied population
  // yields a uniform winner.
  int best = static_cast<int>(rng.uniform_int(0, n - 1));
  for (int k = 1; k < tournament_size; ++k) {
    const int candidate = static_cast<int>(rng.uniform_int(0, n - 1));
    if (fitness[candidate] > fitness[best]) best = candidate;
  }
  return best;
}

EvolutionResult evolve(const GaConfig& ga, const GenomeBounds& bounds,
                       const Objective& objective, uint64_t seed, int n_threads,
                       const GenerationCallback& on_generation) {
  if (auto err = ga_config_error(ga)) throw ConfigError("ga config: " + *err);
  check_bounds(bounds);

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  Rng rng(seed);
  Evaluator evaluator(objective);
  MutationConfig mutation_cfg{ga.mutation_type_probs, ga.radical_prob};

  std::vector<Genome> population;
  population.reserve(ga.population);
  for (int i = 0; i < ga.population; ++i)
    population.push_back(random_genome(bounds, rng));

  std::vector<double> fitness(ga.population, 0.0);
  EvolutionResult result;

  for (int gen = 0;; ++gen) {
    parallel_for(ga.population, n_threads,
                 [&](int i) { fitness[i] = evaluator.evaluate(population[i]); });

    int best_index = 0;
    for (int i = 1; i < ga.population; ++i)
      if (fitness[i] > fitness[best_index]) best_index = i;
    const double f_best = fitness[best_index];
    const double f_avg =
        std::accumulate(fitness.begin(), fitness.end(), 0.0) / ga.population;
    const double mu = adaptive_multiplier(f_avg, f_best, ga.mu_min, ga.mu_max);

    result.stats.push_back(GenerationStats{gen, f_best, f_avg, mu,
                                           evaluator.cache_hits(), elapsed()});
    if (on_generation) on_generation(result.stats.back());

    result.best = population[best_index];
    result.best_fitness = f_best;
    result.generations = gen;

    if (f_best >= ga.success_fitness_threshold) {
      result.reason = Termination::Threshold;
      return result;
    }
    if (gen >= 1 && f_best > 0.0 &&
        f_avg >= ga.convergence_ratio_stop * f_best) {
      result.reason = Termination::Converged;
      return result;
    }
    if (gen >= ga.max_generations) {
      result.reason = Termination::Budget;
      return result;
    }

    // Parent pool via tournament, then offspring from distinct pool picks.
    std::vector<int> parents(ga.parents_per_gen);
    for (int& p : parents)
      p = tournament_select(fitness, ga.tournament_size, rng);

    std::vector<Genome> offspring;
    offspring.reserve(ga.replace_per_gen);
    for (int c = 0; c < ga.replace_per_gen; ++c) {
      const auto pool = static_cast<int64_t>(parents.size());
      const int i = static_cast<int>(rng.uniform_int(0, pool - 1));
      int j = static_cast<int>(rng.uniform_int(0, pool - 2));
      if (j >= i) ++j;
      Genome child = crossover(population[parents[i]], population[parents[j]], rng);
      offspring.push_back(
          mutate(child, bounds, mu, ga.base_mutation, rng, mutation_cfg));
    }

    // Stable sort keeps ties in creation order; the replace_per_gen worst
    // individuals give way to the offspring, elites and the midfield survive.
    std::vector<int> order(ga.population);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&fitness](int a, int b) {
      return fitness[a] > fitness[b];
    });

    std::vector<Genome> next;
    next.reserve(ga.population);
    for (int i = 0; i < ga.population - ga.replace_per_gen; ++i)
      next.push_back(std::move(population[order[i]]));
    for (auto& child : offspring) next.push_back(std::move(child));
    population = std::move(next);
  }
}

}  // namespace morpho
