#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>

#include "morpho/genome.hpp"
#include "morpho/graph.hpp"
#include "morpho/rnn.hpp"

namespace morpho {

// Desired structural triple: node, edge and source (zero in-degree) counts.
struct TargetSpec {
  int n_target = 0;
  int e_target = 0;
  int s_target = 0;
};

struct TargetFitnessConfig {
  double w_n = 1.0, w_e = 1.0, w_s = 1.0;
  double tol_n = 1.0, tol_e = 2.0, tol_s = 1.0;  // must stay positive
  double gamma = 0.5;  // multiplier applied to non-weakly-connected graphs
};

// Connection-count penalty: 1 up to theta_c connections, then an exponential
// decay towards alpha that reaches the midpoint (1 + alpha) / 2 at
// theta_half connections.
struct PenaltyConfig {
  double alpha = 0.8;
  int theta_c = 50;
  int theta_half = 1000;

  double lambda() const;
};

struct EnvFitnessConfig {
  double passing_score = 475.0;  // sigmoid midpoint S
  double slope = 0.05;           // sigmoid slope k
  int episodes = 5;
  std::optional<PenaltyConfig> penalty;
};

// exp(-w|N - Nt|/tol) terms multiplied over the three metrics, times gamma
// when the graph is not weakly connected. Equals 1 exactly on a connected
// exact match.
double target_fitness(const GraphMetrics& m, const TargetSpec& t,
                      const TargetFitnessConfig& c);

double connection_penalty(int n_connections, const PenaltyConfig& p);

// Sigmoid-normalized mean reward, times the connection penalty when one is
// configured.
double env_fitness(double mean_reward, const EnvFitnessConfig& cfg,
                   int n_connections);

// Fitness value of a controller that reaches max_reward on every episode,
// before any connection penalty. Used as the success threshold.
double perfect_env_fitness(const EnvFitnessConfig& cfg,
                           double max_reward = 500.0);

struct TargetObjective {
  TargetSpec target;
  TargetFitnessConfig fitness;
};

struct EnvObjective {
  std::string env_name = "cartpole";
  EnvFitnessConfig fitness;
  RnnConfig rnn;
  uint64_t eval_seed = 0;  // episode seeds derive from this
};

using Objective = std::variant<TargetObjective, EnvObjective>;

// Grow -> measure -> score pipeline with a structural fitness cache.
// evaluate() is a pure function of (genome, objective), so concurrent calls
// only race on the cache, which is guarded.
class Evaluator {
 public:
  explicit Evaluator(Objective objective);

  double evaluate(const Genome& g);

  // Uncached pipeline; also used by the cached path on a miss.
  double evaluate_uncached(const Genome& g) const;

  const Objective& objective() const { return objective_; }
  uint64_t growths() const { return growths_; }
  uint64_t cache_hits() const { return cache_hits_; }

 private:
  Objective objective_;
  std::mutex mutex_;
  std::unordered_map<Genome, double, GenomeHash> cache_;
  std::atomic<uint64_t> growths_{0};
  std::atomic<uint64_t> cache_hits_{0};
};

}  // namespace morpho
