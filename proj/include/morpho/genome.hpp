#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morpho/rng.hpp"

namespace morpho {

// Diffusion kernel: odd-by-odd, entries >= 0, entry sum in (0, 1]. Entry
// (a, b) is the fraction of a cell's mass moved to offset (a - r, b - r)
// each diffusion step, so a kernel summing to 1 conserves mass and a smaller
// sum decays it.
using Kernel = Eigen::ArrayXXd;

struct MorphogenSpec {
  double secretion_progenitor = 0.0;  // added per step at progenitor cells
  double secretion_neuron = 0.0;      // added per step at neuron cells
  Kernel diffusion_kernel;
  // Cross-inhibition coefficients, one per morphogen; entry n is how strongly
  // morphogen n suppresses this one. The self entry is always 0.
  std::vector<double> inhibition_row;
};

struct FateRules {
  int division_morphogen = 0;
  double division_threshold = 0.0;
  int differentiation_morphogen = 0;
  double differentiation_threshold = 0.0;
  int axon_init_morphogen = 0;
  double axon_init_threshold = 0.0;
};

struct AxonRules {
  int guidance_morphogen = 0;
  double connection_threshold = 0.0;  // minimum guidance level to form an edge
  int max_length = 1;                 // step budget per axon, <= width * height
};

// Complete developmental program. Immutable by convention once built: the
// variation operators return fresh genomes and never touch their inputs, so
// genomes can be shared freely across threads.
struct Genome {
  int field_width = 3;
  int field_height = 3;
  std::vector<MorphogenSpec> morphogens;
  FateRules fates;
  AxonRules axon;
  int growth_iterations = 1;

  int morphogen_count() const { return static_cast<int>(morphogens.size()); }
};

bool operator==(const MorphogenSpec& a, const MorphogenSpec& b);
bool operator==(const FateRules& a, const FateRules& b);
bool operator==(const AxonRules& a, const AxonRules& b);
bool operator==(const Genome& a, const Genome& b);

// Structural hash over every field, consistent with operator== (0.0 and -0.0
// hash alike). Keys the fitness cache.
struct GenomeHash {
  size_t operator()(const Genome& g) const;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};
struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Ranges used by random initialization, plus hard limits that mutation clamps
// against. Collapsing an init range to a single value pins that field.
struct GenomeBounds {
  // Init ranges; defaults pin the structural fields the way experiment
  // configs start them.
  IntRange field_width{20, 20};
  IntRange field_height{20, 20};
  IntRange morphogen_count{3, 3};
  IntRange growth_iterations{200, 200};
  IntRange axon_max_length{5, 50};
  int kernel_size = 3;  // odd; fixed for the run (mutation perturbs entries only)

  RealRange secretion{0.0, 1.0};
  RealRange threshold{0.0, 2.0};   // division, differentiation, axon-init
  // Connection threshold init; wiring density is very sensitive to it, so it
  // gets its own range (defaults to the fate range).
  std::optional<RealRange> connection_threshold;
  RealRange inhibition{0.0, 1.0};

  RealRange connection_threshold_range() const {
    return connection_threshold ? *connection_threshold : threshold;
  }

  // Hard limits for mutated integer fields.
  IntRange field_limits{3, 64};
  IntRange iteration_limits{1, 1000};
  IntRange morphogen_limits{1, 13};

  // Step size of the integer flavor of parameter mutation.
  int int_param_delta = 1;
};

// Empty result means valid; otherwise a description of the first violated
// invariant.
std::optional<std::string> validity_error(const Genome& g);
std::optional<std::string> bounds_error(const GenomeBounds& b);

// Throwing wrappers (ConfigError).
void check_valid(const Genome& g);
void check_bounds(const GenomeBounds& b);

// Draws a genome uniformly from `bounds`. Identical bounds and rng state give
// identical genomes. Throws ConfigError on invalid bounds.
Genome random_genome(const GenomeBounds& bounds, Rng& rng);

// Recombines two valid parents. With equal morphogen counts, scalar fields
// are inherited per-field from a random parent, secretion rates element-wise,
// inhibition rows row-wise and each kernel whole from one parent. With
// different counts, one parent donates its entire morphogen list.
Genome crossover(const Genome& a, const Genome& b, Rng& rng);

// With probability min(1, base_rate * multiplier) applies exactly one
// mutation, its type drawn from cfg.type_probs in this order: grid size,
// growth steps, parameter, morphogen count, matrix. Independently, a rare
// radical mutation rerandomizes the morphogen set and the iteration budget.
// Results are clamped so every genome invariant keeps holding.
struct MutationConfig {
  std::array<double, 5> type_probs{0.15, 0.15, 0.45, 0.10, 0.15};
  double radical_prob = 0.05;
};
Genome mutate(const Genome& g, const GenomeBounds& bounds, double multiplier,
              double base_rate, Rng& rng, const MutationConfig& cfg = {});

// Canonical JSON codec ("schema": 1). decode(encode(g)) == g exactly.
std::string encode_genome(const Genome& g);
Genome decode_genome(const std::string& json_text);
Genome load_genome_file(const std::string& path);
void save_genome_file(const Genome& g, const std::string& path);

}  // namespace morpho
