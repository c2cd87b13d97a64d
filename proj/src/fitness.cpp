#include "morpho/fitness.hpp"

#include <cmath>

#include "morpho/env.hpp"
#include "morpho/errors.hpp"
#include "morpho/morphogenesis.hpp"

namespace morpho {

double PenaltyConfig::lambda() const {
  return std::log(2.0) / (theta_half - theta_c);
}

double target_fitness(const GraphMetrics& m, const TargetSpec& t,
                      const TargetFitnessConfig& c) {
  if (c.tol_n <= 0.0 || c.tol_e <= 0.0 || c.tol_s <= 0.0)
    throw ConfigError("fitness tolerances must be positive");
  const double f =
      std::exp(-c.w_n * std::abs(m.n_nodes - t.n_target) / c.tol_n) *
      std::exp(-c.w_e * std::abs(m.n_edges - t.e_target) / c.tol_e) *
      std::exp(-c.w_s * std::abs(m.n_sources - t.s_target) / c.tol_s);
  return f * (m.weakly_connected ? 1.0 : c.gamma);
}

double connection_penalty(int n_connections, const PenaltyConfig& p) {
  if (p.theta_half <= p.theta_c)
    throw ConfigError("theta_half must exceed theta_c");
  const double excess = std::max(0, n_connections - p.theta_c);
  return p.alpha + (1.0 - p.alpha) * std::exp(-p.lambda() * excess);
}

double env_fitness(double mean_reward, const EnvFitnessConfig& cfg,
                   int n_connections) {
  double f = 1.0 / (1.0 + std::exp(-cfg.slope * (mean_reward - cfg.passing_score)));
  if (cfg.penalty) f *= connection_penalty(n_connections, *cfg.penalty);
  return f;
}

double perfect_env_fitness(const EnvFitnessConfig& cfg, double max_reward) {
  return 1.0 / (1.0 + std::exp(-cfg.slope * (max_reward - cfg.passing_score)));
}

Evaluator::Evaluator(Objective objective) : objective_(std::move(objective)) {}

double Evaluator::evaluate_uncached(const Genome& g) const {
  const GrownGraph graph = grow(g);
  if (const auto* target = std::get_if<TargetObjective>(&objective_))
    return target_fitness(metrics(graph), target->target, target->fitness);

  const auto& env_obj = std::get<EnvObjective>(objective_);
  const auto env = make_environment(env_obj.env_name);
  const auto io =
      select_io(graph, env->observation_dim(), env->action_count());
  if (!io) return 0.0;  // graph smaller than the problem dimensions
  const Rnn rnn(graph, env_obj.rnn);
  const double mean_reward = rollout_mean_reward(
      *env, rnn, *io, env_obj.fitness.episodes, env_obj.eval_seed);
  return env_fitness(mean_reward, env_obj.fitness,
                     static_cast<int>(graph.edges.size()));
}

double Evaluator::evaluate(const Genome& g) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = cache_.find(g);
    if (it != cache_.end()) {
      cache_hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second;
    }
  }
  growths_.fetch_add(1, std::memory_order_relaxed);
  const double fitness = evaluate_uncached(g);
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(g, fitness);
  return fitness;
}

}  // namespace morpho
