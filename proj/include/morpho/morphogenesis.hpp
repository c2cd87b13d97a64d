#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "morpho/genome.hpp"
#include "morpho/graph.hpp"

namespace morpho {

// Morphogen concentration grid, shape (field_width, field_height); entry
// (i, j) is the concentration at x = i, y = j. All entries stay >= 0.
using Grid = Eigen::ArrayXXd;

enum class CellKind : uint8_t { Empty, Progenitor, Neuron };

struct ActiveAxon {
  int32_t source = 0;           // neuron id the axon grows from
  Eigen::Vector2i head{0, 0};   // current tip position
  int length = 0;               // steps taken so far, <= axon max_length
  bool retired = false;
};

// Developmental state on the toroidal lattice: one concentration grid per
// morphogen plus cell occupancy. Neuron ids are assigned in creation order
// and stay dense in [0, neuron_count).
struct Field {
  int width = 0;
  int height = 0;
  std::vector<Grid> conc;            // per morphogen
  std::vector<CellKind> cells;       // row-major, index = y * width + x
  std::vector<int32_t> neuron_ids;   // row-major; -1 where no neuron
  std::vector<Eigen::Vector2i> neuron_pos;  // by neuron id
  std::vector<uint8_t> axon_active;         // by neuron id
  std::vector<ActiveAxon> axons;            // spawn order
  int step = 0;

  CellKind kind(int x, int y) const { return cells[y * width + x]; }
  int32_t neuron_at(int x, int y) const { return neuron_ids[y * width + x]; }
  int neuron_count() const { return static_cast<int>(neuron_pos.size()); }
};

// Empty field with one progenitor at the center and zero concentrations.
Field make_field(const Genome& g);

// One secretion pass: every occupied cell adds its type's rate to each
// morphogen at its own position.
void secrete(Field& f, const Genome& g);

// Toroidal convolution of `grid` with `kernel` (odd-sized, entries >= 0,
// sum <= 1). Kernel entry (a, b) sends mass to offset (a - r, b - r).
Grid diffuse(const Grid& grid, const Kernel& kernel);
void diffuse_into(const Grid& grid, const Kernel& kernel, Grid& out);

// Cross-inhibition with simultaneous semantics: every factor is computed
// from the pre-update snapshot, and results clamp at zero.
void inhibit(Field& f, const Genome& g);

// Row-major fate scan over the cells present at phase start. Progenitors
// divide into the first free von-Neumann neighbor (N, E, S, W order) when
// the division signal is met, else differentiate when that signal is met;
// neurons without an active axon spawn one when the axon-init signal is met.
// Newly created neurons become graph nodes.
void apply_cell_fates(Field& f, const Genome& g, GrownGraph& graph);

// Each active axon climbs the guidance gradient one cell (strict ascent,
// N/E/S/W tiebreak) or retires. Landing on a foreign neuron at or above the
// connection threshold forms an edge with weight min(1, max(0.01, c/(1+d))).
void grow_axons(Field& f, const Genome& g, GrownGraph& graph);

// Competitive weight maintenance: every edge is reweighted to
// max(0.01, c_local / c_total) over the target's 3x3 neighborhood; targets
// with zero neighborhood concentration keep their weight.
void rescale_weights(const Field& f, const Genome& g, GrownGraph& graph);

struct TraceFrame {
  int step = 0;  // 0 = initial state, k = after iteration k
  int width = 0;
  int height = 0;
  std::vector<Grid> conc;
  std::vector<CellKind> cells;
  std::vector<int32_t> neuron_ids;
};

struct DevelopmentTrace {
  std::vector<TraceFrame> frames;
};

// Runs the full developmental loop (secretion, diffusion, inhibition, cell
// fates, axon growth, weight maintenance) for exactly growth_iterations
// steps. Pure function of the genome.
GrownGraph grow(const Genome& g);
GrownGraph grow(const Genome& g, const std::vector<int>& trace_steps,
                DevelopmentTrace& trace);

// Plain text frame dump: "step W H M" header, M row-major concentration
// grids, then the cell grid ('.', 'P', or the neuron id).
void write_trace_frame(std::ostream& out, const TraceFrame& frame);

// Minimal toroidal Euclidean distance between two positions.
double torus_distance(const Eigen::Vector2i& a, const Eigen::Vector2i& b,
                      int width, int height);

}  // namespace morpho
