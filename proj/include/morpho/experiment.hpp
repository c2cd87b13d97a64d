#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "morpho/evolution.hpp"
#include "morpho/fitness.hpp"
#include "morpho/genome.hpp"
#include "morpho/rnn.hpp"

namespace morpho {

// Random-digraph sampling box for target generation.
struct TargetSampling {
  int count = 20;
  uint64_t seed_target = 54210;
  double k_min = 1.5;   // minimum average out-degree E/N
  double d_max = 0.3;   // maximum density E / (N (N - 1))
  IntRange n_range{8, 31};
};

// One self-contained experiment: objective family, genome bounds, GA setup
// and the seeded run battery.
struct ExperimentConfig {
  std::string family;  // "graph-target" or "env-control"
  GenomeBounds bounds;
  GaConfig ga;

  // graph-target family: explicit triples, or sampled when empty.
  std::vector<TargetSpec> targets;
  TargetSampling sampling;
  TargetFitnessConfig target_fitness;

  // env-control family.
  std::string env_name = "cartpole";
  EnvFitnessConfig env_fitness;
  RnnConfig rnn;

  int runs = 1;
  uint64_t seed_runs = 65420;
  int eval_threads = 1;     // within-run fitness parallelism
  int run_parallelism = 0;  // concurrent runs; 0 = hardware threads
  std::string out_dir = "out";
};

ExperimentConfig default_target_experiment();
ExperimentConfig default_env_experiment(bool with_penalty);

// JSON codec for config files; load applies family defaults to omitted keys
// and validates. load(save(cfg)) == cfg.
std::string encode_experiment_config(const ExperimentConfig& cfg);
ExperimentConfig decode_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Samples `count` directed G(n, m) graphs with n in n_range and m chosen so
// that m/n >= k_min and density <= d_max, and returns their (N, E, S)
// triples. Deterministic per seed; throws ConfigError when the constraints
// cannot be met.
std::vector<TargetSpec> gen_targets(int count, uint64_t seed_target,
                                    double k_min, double d_max,
                                    IntRange n_range = {8, 31});

// The R run seeds are consecutive draws from a stream seeded with seed_runs,
// shared by every target in a battery.
std::vector<uint64_t> derive_run_seeds(uint64_t seed_runs, int runs);

// Objective for one battery slot (env evaluation seeds derive from the run
// seed, so each run faces its own fixed episode set).
Objective make_objective(const ExperimentConfig& cfg, int target_index,
                         uint64_t run_seed);

struct RunRecord {
  std::string target_id;  // "T01"... or the environment name
  int run_index = 0;
  uint64_t seed = 0;
  double best_fitness = 0.0;
  int generations = 0;
  std::string termination;
  bool success = false;
  GraphMetrics best_metrics;
  std::string best_genome_path;
  std::string best_graph_path;
};

struct TargetSummary {
  std::string target_id;
  std::optional<TargetSpec> target;
  double success_rate = 0.0;
  double mean_best = 0.0;
  double std_best = 0.0;
};

struct BatteryReport {
  std::vector<RunRecord> records;
  std::vector<TargetSummary> summary;
};

// Executes runs x targets, writing config.json, targets.json, per-run
// stats/genomes/graphs/records and summary.csv under cfg.out_dir. Rerunning
// the same config reproduces every record byte for byte (timing lives only
// in stats.csv).
BatteryReport run_battery(const ExperimentConfig& cfg,
                          std::ostream* log = nullptr);

// Rebuilds the summary (and summary.csv) from the records on disk.
BatteryReport load_report(const std::string& run_dir);
void write_summary_csv(const BatteryReport& report, const std::string& path);
std::string format_summary(const BatteryReport& report);

}  // namespace morpho
