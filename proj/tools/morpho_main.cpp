#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morpho/env.hpp"
#include "morpho/errors.hpp"
#include "morpho/evolution.hpp"
#include "morpho/experiment.hpp"
#include "morpho/fitness.hpp"
#include "morpho/genome.hpp"
#include "morpho/graph.hpp"
#include "morpho/morphogenesis.hpp"
#include "morpho/rnn.hpp"

namespace {

namespace fs = std::filesystem;
using namespace morpho;

std::string format_full(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<int> parse_step_list(const std::string& text) {
  std::vector<int> steps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) steps.push_back(std::stoi(item));
  }
  return steps;
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

int cmd_grow(const std::string& genome_path, const std::string& trace_list,
             const std::string& trace_dir, const std::string& format,
             const std::string& out_path) {
  const Genome genome = load_genome_file(genome_path);
  GrownGraph graph;
  if (!trace_list.empty()) {
    DevelopmentTrace trace;
    graph = grow(genome, parse_step_list(trace_list), trace);
    fs::create_directories(trace_dir);
    for (const auto& frame : trace.frames) {
      const fs::path path =
          fs::path(trace_dir) / ("step_" + std::to_string(frame.step) + ".txt");
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      write_trace_frame(out, frame);
    }
  } else {
    graph = grow(genome);
  }
  write_text(out_path, export_graph(graph, format));
  return 0;
}

int cmd_gen_targets(int count, uint64_t seed, double k_min, double d_max,
                    int n_min, int n_max, const std::string& out_path) {
  const auto targets =
      gen_targets(count, seed, k_min, d_max, IntRange{n_min, n_max});
  std::ostringstream out;
  out << "[\n";
  for (size_t i = 0; i < targets.size(); ++i) {
    out << "  {\"N\": " << targets[i].n_target
        << ", \"E\": " << targets[i].e_target
        << ", \"S\": " << targets[i].s_target << '}';
    out << (i + 1 < targets.size() ? ",\n" : "\n");
  }
  out << "]\n";
  write_text(out_path, out.str());
  return 0;
}

struct BatteryOverrides {
  std::string out_dir;
  int runs = -1;
  int threads = -1;
  int run_parallelism = -1;
  int64_t seed_runs = -1;
  bool quiet = false;
};

int cmd_battery(const std::string& config_path, const std::string& family,
                const BatteryOverrides& ov) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (cfg.family != family)
    throw ConfigError("config family is '" + cfg.family + "', expected '" +
                      family + "'");
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (ov.runs >= 1) cfg.runs = ov.runs;
  if (ov.threads >= 0) cfg.eval_threads = ov.threads;
  if (ov.run_parallelism >= 0) cfg.run_parallelism = ov.run_parallelism;
  if (ov.seed_runs >= 0) cfg.seed_runs = static_cast<uint64_t>(ov.seed_runs);
  const BatteryReport report =
      run_battery(cfg, ov.quiet ? nullptr : &std::cerr);
  std::cout << format_summary(report);
  return 0;
}

int cmd_eval(const std::string& genome_path, const std::string& objective_kind,
             const std::string& config_path, const std::string& target_triple,
             int64_t seed) {
  const Genome genome = load_genome_file(genome_path);

  Objective objective;
  if (!config_path.empty()) {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const bool env_family = cfg.family == "env-control";
    if ((objective_kind == "env") != env_family)
      throw ConfigError("config family does not match --objective");
    ExperimentConfig patched = cfg;
    if (patched.family == "graph-target" && patched.targets.empty())
      patched.targets = gen_targets(patched.sampling.count,
                                    patched.sampling.seed_target,
                                    patched.sampling.k_min, patched.sampling.d_max,
                                    patched.sampling.n_range);
    objective = make_objective(patched, 0, seed >= 0 ? seed : patched.seed_runs);
  } else if (objective_kind == "target") {
    TargetObjective obj;
    std::stringstream ss(target_triple);
    char sep = 0;
    if (!(ss >> obj.target.n_target >> sep >> obj.target.e_target >> sep >>
          obj.target.s_target))
      throw ConfigError("--target must look like N,E,S");
    objective = obj;
  } else if (objective_kind == "env") {
    ExperimentConfig cfg = default_env_experiment(false);
    objective = make_objective(cfg, 0, seed >= 0 ? seed : cfg.seed_runs);
  } else {
    throw ConfigError("--objective must be 'target' or 'env'");
  }

  Evaluator evaluator(objective);
  std::cout << format_full(evaluator.evaluate(genome)) << '\n';
  return 0;
}

int cmd_report(const std::string& run_dir) {
  const BatteryReport report = load_report(run_dir);
  write_summary_csv(report, (fs::path(run_dir) / "summary.csv").string());
  std::cout << format_summary(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morphogenetic growth of recurrent networks: develop graphs "
               "from genomes, evolve them toward structural or control "
               "objectives, and reproduce seeded experiment batteries."};
  app.require_subcommand(1);

  // grow
  auto* grow_cmd = app.add_subcommand("grow", "Develop a genome into a graph");
  std::string genome_path, trace_list, trace_dir = "trace", format = "edge-json",
              out_path;
  grow_cmd->add_option("genome", genome_path, "Genome JSON file")->required();
  grow_cmd->add_option("--trace", trace_list,
                       "Comma-separated step numbers to dump (0 = initial)");
  grow_cmd->add_option("--trace-dir", trace_dir, "Directory for trace frames");
  grow_cmd->add_option("--export", format, "Output format: edge-json or dot");
  grow_cmd->add_option("--out", out_path, "Output file (default stdout)");

  // gen-targets
  auto* targets_cmd =
      app.add_subcommand("gen-targets", "Sample structural target triples");
  int t_count = 20, t_nmin = 8, t_nmax = 31;
  uint64_t t_seed = 54210;
  double t_kmin = 1.5, t_dmax = 0.3;
  std::string t_out;
  targets_cmd->add_option("--count", t_count, "Number of targets");
  targets_cmd->add_option("--seed", t_seed, "Sampling seed");
  targets_cmd->add_option("--k-min", t_kmin, "Minimum average out-degree");
  targets_cmd->add_option("--d-max", t_dmax, "Maximum density");
  targets_cmd->add_option("--n-min", t_nmin, "Minimum node count");
  targets_cmd->add_option("--n-max", t_nmax, "Maximum node count");
  targets_cmd->add_option("--out", t_out, "Output file (default stdout)");

  // evolve-target / evolve-env
  BatteryOverrides ov;
  std::string config_path;
  const auto add_battery_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config JSON")
        ->required();
    cmd->add_option("--out", ov.out_dir, "Output directory override");
    cmd->add_option("--runs", ov.runs, "Run count override");
    cmd->add_option("--threads", ov.threads, "Within-run evaluation threads");
    cmd->add_option("--run-parallelism", ov.run_parallelism,
                    "Concurrent runs (0 = hardware)");
    cmd->add_option("--seed", ov.seed_runs, "seed_runs override");
    cmd->add_flag("--quiet", ov.quiet, "Suppress progress lines");
  };
  auto* evolve_target_cmd = app.add_subcommand(
      "evolve-target", "Run a seeded battery toward graph targets");
  add_battery_options(evolve_target_cmd);
  auto* evolve_env_cmd = app.add_subcommand(
      "evolve-env", "Run a seeded battery toward an environment objective");
  add_battery_options(evolve_env_cmd);

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "Evaluate one genome against an objective");
  std::string eval_genome, eval_objective, eval_config, eval_target;
  int64_t eval_seed = -1;
  eval_cmd->add_option("genome", eval_genome, "Genome JSON file")->required();
  eval_cmd->add_option("--objective", eval_objective, "'target' or 'env'")
      ->required();
  eval_cmd->add_option("--config", eval_config, "Experiment config JSON");
  eval_cmd->add_option("--target", eval_target, "Target triple N,E,S");
  eval_cmd->add_option("--seed", eval_seed, "Evaluation seed (env objective)");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "Regenerate the summary of a battery");
  std::string report_dir;
  report_cmd->add_option("dir", report_dir, "Battery output directory")
      ->required();

  try {
    app.parse(argc, argv);
    if (grow_cmd->parsed())
      return cmd_grow(genome_path, trace_list, trace_dir, format, out_path);
    if (targets_cmd->parsed())
      return cmd_gen_targets(t_count, t_seed, t_kmin, t_dmax, t_nmin, t_nmax,
                             t_out);
    if (evolve_target_cmd->parsed())
      return cmd_battery(config_path, "graph-target", ov);
    if (evolve_env_cmd->parsed())
      return cmd_battery(config_path, "env-control", ov);
    if (eval_cmd->parsed())
      return cmd_eval(eval_genome, eval_objective, eval_config, eval_target,
                      eval_seed);
    if (report_cmd->parsed()) return cmd_report(report_dir);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
