#include "morpho/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "morpho/env.hpp"
#include "morpho/errors.hpp"
#include "morpho/morphogenesis.hpp"
#include "morpho/parallel.hpp"

namespace morpho {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Sub-stream tag separating environment episode seeds from the GA stream.
constexpr uint64_t kEvalSeedTag = 0xE7A1;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string target_label(int index) {
  std::string n = std::to_string(index + 1);
  if (n.size() < 2) n.insert(n.begin(), '0');
  return "T" + n;
}

ordered_json range_json(const IntRange& r) { return {r.lo, r.hi}; }
ordered_json range_json(const RealRange& r) { return {r.lo, r.hi}; }

IntRange int_range(const ordered_json& j, const IntRange& d) {
  if (j.is_null()) return d;
  return IntRange{j.at(0).get<int>(), j.at(1).get<int>()};
}

RealRange real_range(const ordered_json& j, const RealRange& d) {
  if (j.is_null()) return d;
  return RealRange{j.at(0).get<double>(), j.at(1).get<double>()};
}

ordered_json bounds_json(const GenomeBounds& b) {
  ordered_json j;
  j["field_width"] = range_json(b.field_width);
  j["field_height"] = range_json(b.field_height);
  j["morphogen_count"] = range_json(b.morphogen_count);
  j["growth_iterations"] = range_json(b.growth_iterations);
  j["axon_max_length"] = range_json(b.axon_max_length);
  j["kernel_size"] = b.kernel_size;
  j["secretion"] = range_json(b.secretion);
  j["threshold"] = range_json(b.threshold);
  j["inhibition"] = range_json(b.inhibition);
  j["field_limits"] = range_json(b.field_limits);
  j["iteration_limits"] = range_json(b.iteration_limits);
  j["morphogen_limits"] = range_json(b.morphogen_limits);
  j["int_param_delta"] = b.int_param_delta;
  return j;
}

GenomeBounds bounds_from_json(const ordered_json& j, GenomeBounds b) {
  if (j.is_null()) return b;
  b.field_width = int_range(j.value("field_width", ordered_json()), b.field_width);
  b.field_height = int_range(j.value("field_height", ordered_json()), b.field_height);
  b.morphogen_count =
      int_range(j.value("morphogen_count", ordered_json()), b.morphogen_count);
  b.growth_iterations = int_range(j.value("growth_iterations", ordered_json()),
                                  b.growth_iterations);
  b.axon_max_length =
      int_range(j.value("axon_max_length", ordered_json()), b.axon_max_length);
  b.kernel_size = j.value("kernel_size", b.kernel_size);
  b.secretion = real_range(j.value("secretion", ordered_json()), b.secretion);
  b.threshold = real_range(j.value("threshold", ordered_json()), b.threshold);
  b.inhibition = real_range(j.value("inhibition", ordered_json()), b.inhibition);
  b.field_limits = int_range(j.value("field_limits", ordered_json()), b.field_limits);
  b.iteration_limits =
      int_range(j.value("iteration_limits", ordered_json()), b.iteration_limits);
  b.morphogen_limits =
      int_range(j.value("morphogen_limits", ordered_json()), b.morphogen_limits);
  b.int_param_delta = j.value("int_param_delta", b.int_param_delta);
  return b;
}

ordered_json ga_json(const GaConfig& g) {
  ordered_json j;
  j["population"] = g.population;
  j["tournament_size"] = g.tournament_size;
  j["parents_per_gen"] = g.parents_per_gen;
  j["replace_per_gen"] = g.replace_per_gen;
  j["elites"] = g.elites;
  j["max_generations"] = g.max_generations;
  j["base_mutation"] = g.base_mutation;
  j["mu_min"] = g.mu_min;
  j["mu_max"] = g.mu_max;
  j["mutation_type_probs"] = g.mutation_type_probs;
  j["radical_prob"] = g.radical_prob;
  j["success_fitness_threshold"] = g.success_fitness_threshold;
  j["convergence_ratio_stop"] = g.convergence_ratio_stop;
  return j;
}

GaConfig ga_from_json(const ordered_json& j, GaConfig g) {
  if (j.is_null()) return g;
  g.population = j.value("population", g.population);
  g.tournament_size = j.value("tournament_size", g.tournament_size);
  g.parents_per_gen = j.value("parents_per_gen", g.parents_per_gen);
  g.replace_per_gen = j.value("replace_per_gen", g.replace_per_gen);
  g.elites = j.value("elites", g.elites);
  g.max_generations = j.value("max_generations", g.max_generations);
  g.base_mutation = j.value("base_mutation", g.base_mutation);
  g.mu_min = j.value("mu_min", g.mu_min);
  g.mu_max = j.value("mu_max", g.mu_max);
  if (j.contains("mutation_type_probs")) {
    const auto& p = j.at("mutation_type_probs");
    if (p.size() != g.mutation_type_probs.size())
      throw ConfigError("config: mutation_type_probs must have 5 entries");
    for (size_t i = 0; i < g.mutation_type_probs.size(); ++i)
      g.mutation_type_probs[i] = p.at(i).get<double>();
  }
  g.radical_prob = j.value("radical_prob", g.radical_prob);
  g.success_fitness_threshold =
      j.value("success_fitness_threshold", g.success_fitness_threshold);
  g.convergence_ratio_stop =
      j.value("convergence_ratio_stop", g.convergence_ratio_stop);
  return g;
}

std::string mode_name(UpdateMode m) {
  return m == UpdateMode::Accumulation ? "accumulation" : "replacement";
}

UpdateMode mode_from_name(const std::string& s) {
  if (s == "accumulation") return UpdateMode::Accumulation;
  if (s == "replacement") return UpdateMode::Replacement;
  throw ConfigError("config: unknown rnn mode: " + s);
}

std::string activation_name(ActivationKind a) {
  switch (a) {
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Sigmoid: return "sigmoid";
    default: return "identity";
  }
}

ActivationKind activation_from_name(const std::string& s) {
  if (s == "tanh") return ActivationKind::Tanh;
  if (s == "sigmoid") return ActivationKind::Sigmoid;
  if (s == "identity") return ActivationKind::Identity;
  throw ConfigError("config: unknown activation: " + s);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.family != "graph-target" && cfg.family != "env-control")
    throw ConfigError("config: family must be graph-target or env-control");
  if (cfg.runs < 1) throw ConfigError("config: runs must be at least 1");
  check_bounds(cfg.bounds);
  if (auto err = ga_config_error(cfg.ga))
    throw ConfigError("config: " + *err);
  if (cfg.family == "graph-target") {
    if (cfg.target_fitness.tol_n <= 0.0 || cfg.target_fitness.tol_e <= 0.0 ||
        cfg.target_fitness.tol_s <= 0.0)
      throw ConfigError("config: tolerances must be positive");
    if (cfg.target_fitness.gamma <= 0.0 || cfg.target_fitness.gamma > 1.0)
      throw ConfigError("config: gamma must be in (0, 1]");
    for (const auto& t : cfg.targets) {
      if (t.n_target < 0 || t.e_target < 0 || t.s_target < 0 ||
          t.s_target > t.n_target)
        throw ConfigError("config: invalid target triple");
    }
    if (cfg.targets.empty()) {
      if (cfg.sampling.count < 1)
        throw ConfigError("config: target sampling count must be at least 1");
      if (cfg.sampling.k_min <= 0.0)
        throw ConfigError("config: k_min must be positive");
      if (cfg.sampling.d_max <= 0.0 || cfg.sampling.d_max > 1.0)
        throw ConfigError("config: d_max must be in (0, 1]");
    }
  } else {
    if (cfg.env_fitness.episodes < 1)
      throw ConfigError("config: episodes must be at least 1");
    if (cfg.env_fitness.slope <= 0.0)
      throw ConfigError("config: sigmoid slope must be positive");
    if (cfg.env_fitness.penalty) {
      const auto& p = *cfg.env_fitness.penalty;
      if (p.alpha <= 0.0 || p.alpha >= 1.0)
        throw ConfigError("config: penalty alpha must be in (0, 1)");
      if (p.theta_c < 0 || p.theta_half <= p.theta_c)
        throw ConfigError("config: penalty thresholds must satisfy theta_half > theta_c >= 0");
    }
    make_environment(cfg.env_name);  // name check
  }
  if (cfg.eval_threads < 0 || cfg.run_parallelism < 0)
    throw ConfigError("config: thread counts must be non-negative");
}

}  // namespace

ExperimentConfig default_target_experiment() {
  ExperimentConfig cfg;
  cfg.family = "graph-target";
  cfg.runs = 20;
  return cfg;
}

ExperimentConfig default_env_experiment(bool with_penalty) {
  ExperimentConfig cfg;
  cfg.family = "env-control";
  cfg.bounds.field_width = {10, 10};
  cfg.bounds.field_height = {10, 10};
  cfg.ga.population = 500;
  cfg.ga.parents_per_gen = 100;
  cfg.ga.replace_per_gen = 50;
  cfg.ga.base_mutation = 0.3;
  if (with_penalty) cfg.env_fitness.penalty = PenaltyConfig{};
  cfg.ga.success_fitness_threshold = perfect_env_fitness(cfg.env_fitness);
  cfg.runs = 100;
  return cfg;
}

std::string encode_experiment_config(const ExperimentConfig& cfg) {
  ordered_json j;
  j["family"] = cfg.family;
  j["runs"] = cfg.runs;
  j["seed_runs"] = cfg.seed_runs;
  j["eval_threads"] = cfg.eval_threads;
  j["run_parallelism"] = cfg.run_parallelism;
  j["out_dir"] = cfg.out_dir;
  j["bounds"] = bounds_json(cfg.bounds);
  j["ga"] = ga_json(cfg.ga);
  if (cfg.family == "graph-target") {
    ordered_json targets = ordered_json::array();
    for (const auto& t : cfg.targets)
      targets.push_back({t.n_target, t.e_target, t.s_target});
    j["targets"] = std::move(targets);
    j["target_sampling"] = {{"count", cfg.sampling.count},
                            {"seed_target", cfg.sampling.seed_target},
                            {"k_min", cfg.sampling.k_min},
                            {"d_max", cfg.sampling.d_max},
                            {"n_range", range_json(cfg.sampling.n_range)}};
    j["target_fitness"] = {{"w_n", cfg.target_fitness.w_n},
                           {"w_e", cfg.target_fitness.w_e},
                           {"w_s", cfg.target_fitness.w_s},
                           {"tol_n", cfg.target_fitness.tol_n},
                           {"tol_e", cfg.target_fitness.tol_e},
                           {"tol_s", cfg.target_fitness.tol_s},
                           {"gamma", cfg.target_fitness.gamma}};
  } else {
    ordered_json env;
    env["name"] = cfg.env_name;
    env["passing_score"] = cfg.env_fitness.passing_score;
    env["slope"] = cfg.env_fitness.slope;
    env["episodes"] = cfg.env_fitness.episodes;
    if (cfg.env_fitness.penalty) {
      env["penalty"] = {{"alpha", cfg.env_fitness.penalty->alpha},
                        {"theta_c", cfg.env_fitness.penalty->theta_c},
                        {"theta_half", cfg.env_fitness.penalty->theta_half}};
    } else {
      env["penalty"] = nullptr;
    }
    j["env"] = std::move(env);
    j["rnn"] = {{"mode", mode_name(cfg.rnn.mode)},
                {"activation", activation_name(cfg.rnn.activation)},
                {"extra_steps", cfg.rnn.extra_steps}};
  }
  return j.dump(2);
}

ExperimentConfig decode_experiment_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
  try {
    const std::string family = j.at("family").get<std::string>();
    ExperimentConfig cfg;
    bool env_family = family == "env-control";
    cfg = env_family ? default_env_experiment(false) : default_target_experiment();
    cfg.family = family;
    cfg.runs = j.value("runs", cfg.runs);
    cfg.seed_runs = j.value("seed_runs", cfg.seed_runs);
    cfg.eval_threads = j.value("eval_threads", cfg.eval_threads);
    cfg.run_parallelism = j.value("run_parallelism", cfg.run_parallelism);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.bounds = bounds_from_json(j.value("bounds", ordered_json()), cfg.bounds);

    if (env_family) {
      if (j.contains("env")) {
        const auto& env = j.at("env");
        cfg.env_name = env.value("name", cfg.env_name);
        cfg.env_fitness.passing_score =
            env.value("passing_score", cfg.env_fitness.passing_score);
        cfg.env_fitness.slope = env.value("slope", cfg.env_fitness.slope);
        cfg.env_fitness.episodes =
            env.value("episodes", cfg.env_fitness.episodes);
        if (env.contains("penalty") && !env.at("penalty").is_null()) {
          PenaltyConfig p;
          const auto& pj = env.at("penalty");
          p.alpha = pj.value("alpha", p.alpha);
          p.theta_c = pj.value("theta_c", p.theta_c);
          p.theta_half = pj.value("theta_half", p.theta_half);
          cfg.env_fitness.penalty = p;
        } else if (env.contains("penalty")) {
          cfg.env_fitness.penalty.reset();
        }
      }
      if (j.contains("rnn")) {
        const auto& r = j.at("rnn");
        cfg.rnn.mode = mode_from_name(r.value("mode", mode_name(cfg.rnn.mode)));
        cfg.rnn.activation = activation_from_name(
            r.value("activation", activation_name(cfg.rnn.activation)));
        cfg.rnn.extra_steps = r.value("extra_steps", cfg.rnn.extra_steps);
      }
      // The success threshold tracks the env parameters unless pinned.
      cfg.ga.success_fitness_threshold = perfect_env_fitness(cfg.env_fitness);
    } else {
      if (j.contains("targets")) {
        for (const auto& t : j.at("targets")) {
          cfg.targets.push_back(TargetSpec{t.at(0).get<int>(),
                                           t.at(1).get<int>(),
                                           t.at(2).get<int>()});
        }
      }
      if (j.contains("target_sampling")) {
        const auto& s = j.at("target_sampling");
        cfg.sampling.count = s.value("count", cfg.sampling.count);
        cfg.sampling.seed_target =
            s.value("seed_target", cfg.sampling.seed_target);
        cfg.sampling.k_min = s.value("k_min", cfg.sampling.k_min);
        cfg.sampling.d_max = s.value("d_max", cfg.sampling.d_max);
        cfg.sampling.n_range =
            int_range(s.value("n_range", ordered_json()), cfg.sampling.n_range);
      }
      if (j.contains("target_fitness")) {
        const auto& f = j.at("target_fitness");
        cfg.target_fitness.w_n = f.value("w_n", cfg.target_fitness.w_n);
        cfg.target_fitness.w_e = f.value("w_e", cfg.target_fitness.w_e);
        cfg.target_fitness.w_s = f.value("w_s", cfg.target_fitness.w_s);
        cfg.target_fitness.tol_n = f.value("tol_n", cfg.target_fitness.tol_n);
        cfg.target_fitness.tol_e = f.value("tol_e", cfg.target_fitness.tol_e);
        cfg.target_fitness.tol_s = f.value("tol_s", cfg.target_fitness.tol_s);
        cfg.target_fitness.gamma = f.value("gamma", cfg.target_fitness.gamma);
      }
    }
    cfg.ga = ga_from_json(j.value("ga", ordered_json()), cfg.ga);
    validate_config(cfg);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return decode_experiment_config(buf.str());
}

std::vector<TargetSpec> gen_targets(int count, uint64_t seed_target,
                                    double k_min, double d_max,
                                    IntRange n_range) {
  if (count < 1) throw ConfigError("gen_targets: count must be at least 1");
  if (k_min <= 0.0) throw ConfigError("gen_targets: k_min must be positive");
  if (d_max <= 0.0 || d_max > 1.0)
    throw ConfigError("gen_targets: d_max must be in (0, 1]");
  if (n_range.lo < 2 || n_range.lo > n_range.hi)
    throw ConfigError("gen_targets: invalid node range");

  Rng rng(seed_target);
  std::vector<TargetSpec> targets;
  targets.reserve(count);
  constexpr int kMaxAttempts = 1000;
  for (int k = 0; k < count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const int n = static_cast<int>(rng.uniform_int(n_range.lo, n_range.hi));
      const int m_lo = static_cast<int>(std::ceil(k_min * n));
      const int m_hi = static_cast<int>(std::floor(d_max * n * (n - 1)));
      if (m_lo > m_hi) continue;  // resample n
      const int m = static_cast<int>(rng.uniform_int(m_lo, m_hi));

      // G(n, m): m distinct directed non-loop edges, uniform.
      std::unordered_set<int64_t> edges;
      std::vector<int> in_degree(n, 0);
      while (static_cast<int>(edges.size()) < m) {
        const int src = static_cast<int>(rng.uniform_int(0, n - 1));
        int tgt = static_cast<int>(rng.uniform_int(0, n - 2));
        if (tgt >= src) ++tgt;
        if (edges.insert(static_cast<int64_t>(src) * n + tgt).second)
          ++in_degree[tgt];
      }
      const int sources =
          static_cast<int>(std::count(in_degree.begin(), in_degree.end(), 0));
      targets.push_back(TargetSpec{n, m, sources});
      placed = true;
    }
    if (!placed)
      throw ConfigError("gen_targets: constraints unsatisfiable within the node range");
  }
  return targets;
}

std::vector<uint64_t> derive_run_seeds(uint64_t seed_runs, int runs) {
  Rng stream(seed_runs);
  std::vector<uint64_t> seeds(runs);
  for (auto& s : seeds) s = stream.next_u64();
  return seeds;
}

Objective make_objective(const ExperimentConfig& cfg, int target_index,
                         uint64_t run_seed) {
  if (cfg.family == "graph-target") {
    return TargetObjective{cfg.targets.at(target_index), cfg.target_fitness};
  }
  EnvObjective obj;
  obj.env_name = cfg.env_name;
  obj.fitness = cfg.env_fitness;
  obj.rnn = cfg.rnn;
  obj.eval_seed = derive_seed(run_seed, kEvalSeedTag);
  return obj;
}

namespace {

void write_stats_csv(const std::string& path,
                     const std::vector<GenerationStats>& stats) {
  std::ofstream out(path);
  out << "generation,best,mean,mu,cache_hits,wall_seconds\n";
  for (const auto& s : stats) {
    out << s.generation << ',' << format_double(s.best) << ','
        << format_double(s.mean) << ',' << format_double(s.mu) << ','
        << s.cache_hits << ',' << format_double(s.wall_seconds) << '\n';
  }
}

ordered_json record_json(const RunRecord& r) {
  ordered_json j;
  j["target_id"] = r.target_id;
  j["run_index"] = r.run_index;
  j["seed"] = r.seed;
  j["best_fitness"] = r.best_fitness;
  j["generations"] = r.generations;
  j["termination"] = r.termination;
  j["success"] = r.success;
  j["metrics"] = {{"n_nodes", r.best_metrics.n_nodes},
                  {"n_edges", r.best_metrics.n_edges},
                  {"n_sources", r.best_metrics.n_sources},
                  {"weakly_connected", r.best_metrics.weakly_connected},
                  {"diameter", r.best_metrics.diameter}};
  j["best_genome_path"] = r.best_genome_path;
  j["best_graph_path"] = r.best_graph_path;
  return j;
}

RunRecord record_from_json(const ordered_json& j) {
  RunRecord r;
  r.target_id = j.at("target_id").get<std::string>();
  r.run_index = j.at("run_index").get<int>();
  r.seed = j.at("seed").get<uint64_t>();
  r.best_fitness = j.at("best_fitness").get<double>();
  r.generations = j.at("generations").get<int>();
  r.termination = j.at("termination").get<std::string>();
  r.success = j.at("success").get<bool>();
  const auto& m = j.at("metrics");
  r.best_metrics.n_nodes = m.at("n_nodes").get<int>();
  r.best_metrics.n_edges = m.at("n_edges").get<int>();
  r.best_metrics.n_sources = m.at("n_sources").get<int>();
  r.best_metrics.weakly_connected = m.at("weakly_connected").get<bool>();
  r.best_metrics.diameter = m.at("diameter").get<int>();
  r.best_genome_path = j.at("best_genome_path").get<std::string>();
  r.best_graph_path = j.at("best_graph_path").get<std::string>();
  return r;
}

std::vector<TargetSummary> summarize(
    const std::vector<RunRecord>& records,
    const std::unordered_map<std::string, TargetSpec>& target_map) {
  // Group by target id, keeping first-appearance order.
  std::vector<TargetSummary> summary;
  std::unordered_map<std::string, size_t> index;
  std::unordered_map<std::string, std::vector<double>> best_values;
  std::unordered_map<std::string, int> successes;
  for (const auto& r : records) {
    if (!index.count(r.target_id)) {
      index[r.target_id] = summary.size();
      TargetSummary s;
      s.target_id = r.target_id;
      const auto it = target_map.find(r.target_id);
      if (it != target_map.end()) s.target = it->second;
      summary.push_back(std::move(s));
    }
    best_values[r.target_id].push_back(r.best_fitness);
    successes[r.target_id] += r.success ? 1 : 0;
  }
  for (auto& s : summary) {
    const auto& values = best_values[s.target_id];
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    s.success_rate = successes[s.target_id] / n;
    s.mean_best = mean;
    s.std_best = std::sqrt(var / n);
  }
  return summary;
}

}  // namespace

void write_summary_csv(const BatteryReport& report, const std::string& path) {
  std::ofstream out(path);
  out << "target_id,N,E,S,success_rate,mean_best,std_best\n";
  for (const auto& s : report.summary) {
    out << s.target_id << ',';
    if (s.target)
      out << s.target->n_target << ',' << s.target->e_target << ','
          << s.target->s_target << ',';
    else
      out << ",,,";
    out << format_double(s.success_rate) << ',' << format_double(s.mean_best)
        << ',' << format_double(s.std_best) << '\n';
  }
}

std::string format_summary(const BatteryReport& report) {
  std::ostringstream out;
  out << "target      N    E    S   success   mean_best   std_best\n";
  for (const auto& s : report.summary) {
    char line[160];
    if (s.target) {
      std::snprintf(line, sizeof line, "%-9s %4d %4d %4d   %7.2f   %9.6f  %9.6f\n",
                    s.target_id.c_str(), s.target->n_target, s.target->e_target,
                    s.target->s_target, s.success_rate, s.mean_best, s.std_best);
    } else {
      std::snprintf(line, sizeof line, "%-9s    -    -    -   %7.2f   %9.6f  %9.6f\n",
                    s.target_id.c_str(), s.success_rate, s.mean_best, s.std_best);
    }
    out << line;
  }
  return out.str();
}

BatteryReport run_battery(const ExperimentConfig& cfg_in, std::ostream* log) {
  ExperimentConfig cfg = cfg_in;
  validate_config(cfg);

  const bool target_family = cfg.family == "graph-target";
  if (target_family && cfg.targets.empty())
    cfg.targets = gen_targets(cfg.sampling.count, cfg.sampling.seed_target,
                              cfg.sampling.k_min, cfg.sampling.d_max,
                              cfg.sampling.n_range);

  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir / "runs");
  {
    std::ofstream out(out_dir / "config.json");
    if (!out) throw std::runtime_error("cannot write to " + cfg.out_dir);
    out << encode_experiment_config(cfg_in) << '\n';
  }
  std::unordered_map<std::string, TargetSpec> target_map;
  if (target_family) {
    ordered_json tj = ordered_json::array();
    for (size_t k = 0; k < cfg.targets.size(); ++k) {
      const auto& t = cfg.targets[k];
      target_map[target_label(static_cast<int>(k))] = t;
      tj.push_back({{"id", target_label(static_cast<int>(k))},
                    {"N", t.n_target},
                    {"E", t.e_target},
                    {"S", t.s_target}});
    }
    std::ofstream out(out_dir / "targets.json");
    out << tj.dump(2) << '\n';
  }

  const auto run_seeds = derive_run_seeds(cfg.seed_runs, cfg.runs);
  const int n_targets = target_family ? static_cast<int>(cfg.targets.size()) : 1;
  const int n_slots = n_targets * cfg.runs;

  std::vector<RunRecord> records(n_slots);
  std::mutex log_mutex;

  const int run_threads =
      cfg.run_parallelism == 0 ? default_thread_count() : cfg.run_parallelism;
  parallel_for(n_slots, run_threads, [&](int slot) {
    const int target_index = slot / cfg.runs;
    const int run_index = slot % cfg.runs;
    const uint64_t seed = run_seeds[run_index];
    const Objective objective = make_objective(cfg, target_index, seed);
    const EvolutionResult result =
        evolve(cfg.ga, cfg.bounds, objective, seed, cfg.eval_threads);

    const fs::path run_dir = out_dir / "runs" / std::to_string(slot);
    fs::create_directories(run_dir);
    write_stats_csv((run_dir / "stats.csv").string(), result.stats);
    save_genome_file(result.best, (run_dir / "best_genome.json").string());
    const GrownGraph best_graph = grow(result.best);
    save_graph_file(best_graph, (run_dir / "best_graph.json").string());

    RunRecord rec;
    rec.target_id =
        target_family ? target_label(target_index) : cfg.env_name;
    rec.run_index = run_index;
    rec.seed = seed;
    rec.best_fitness = result.best_fitness;
    rec.generations = result.generations;
    rec.termination = to_string(result.reason);
    rec.success = result.best_fitness >= cfg.ga.success_fitness_threshold;
    rec.best_metrics = metrics(best_graph);
    rec.best_genome_path = "runs/" + std::to_string(slot) + "/best_genome.json";
    rec.best_graph_path = "runs/" + std::to_string(slot) + "/best_graph.json";
    {
      std::ofstream out(run_dir / "record.json");
      out << record_json(rec).dump(2) << '\n';
    }
    records[slot] = std::move(rec);

    if (log) {
      std::lock_guard<std::mutex> lock(log_mutex);
      const auto& r = records[slot];
      *log << "[battery] " << r.target_id << " run " << r.run_index
           << " seed=" << r.seed << " best=" << r.best_fitness
           << " gens=" << r.generations << " stop=" << r.termination
           << (r.success ? " success" : "") << '\n';
    }
  });

  BatteryReport report;
  report.records = std::move(records);
  report.summary = summarize(report.records, target_map);
  write_summary_csv(report, (out_dir / "summary.csv").string());
  return report;
}

BatteryReport load_report(const std::string& run_dir) {
  const fs::path base(run_dir);
  if (!fs::exists(base / "runs"))
    throw ConfigError("no runs directory under " + run_dir);

  std::vector<int> slots;
  for (const auto& entry : fs::directory_iterator(base / "runs")) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.empty() &&
        std::all_of(name.begin(), name.end(), [](char c) { return std::isdigit(c); }))
      slots.push_back(std::stoi(name));
  }
  std::sort(slots.begin(), slots.end());

  BatteryReport report;
  for (int slot : slots) {
    const fs::path record_path = base / "runs" / std::to_string(slot) / "record.json";
    std::ifstream in(record_path);
    if (!in) throw ConfigError("missing record: " + record_path.string());
    ordered_json j;
    in >> j;
    report.records.push_back(record_from_json(j));
  }

  std::unordered_map<std::string, TargetSpec> target_map;
  if (fs::exists(base / "targets.json")) {
    std::ifstream in(base / "targets.json");
    ordered_json tj;
    in >> tj;
    for (const auto& t : tj)
      target_map[t.at("id").get<std::string>()] =
          TargetSpec{t.at("N").get<int>(), t.at("E").get<int>(),
                     t.at("S").get<int>()};
  }
  report.summary = summarize(report.records, target_map);
  return report;
}

}  // namespace morpho
