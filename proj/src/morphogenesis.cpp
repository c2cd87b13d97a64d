#include "morpho/morphogenesis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "morpho/errors.hpp"

namespace morpho {
namespace {

inline int wrap(int v, int n) {
  v %= n;
  return v < 0 ? v + n : v;
}

// Von-Neumann neighbor offsets in tiebreak order: north, east, south, west.
// North is decreasing y (the fate scan runs top-left to bottom-right).
constexpr int kNeighborDx[4] = {0, 1, 0, -1};
constexpr int kNeighborDy[4] = {-1, 0, 1, 0};

uint64_t edge_key(int32_t src, int32_t tgt) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(src)) << 32) |
         static_cast<uint32_t>(tgt);
}

}  // namespace

double torus_distance(const Eigen::Vector2i& a, const Eigen::Vector2i& b,
                      int width, int height) {
  int dx = std::abs(a.x() - b.x());
  int dy = std::abs(a.y() - b.y());
  dx = std::min(dx, width - dx);
  dy = std::min(dy, height - dy);
  return std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy);
}

Field make_field(const Genome& g) {
  Field f;
  f.width = g.field_width;
  f.height = g.field_height;
  f.conc.assign(g.morphogens.size(), Grid::Zero(f.width, f.height));
  f.cells.assign(static_cast<size_t>(f.width) * f.height, CellKind::Empty);
  f.neuron_ids.assign(static_cast<size_t>(f.width) * f.height, -1);
  const int cx = f.width / 2;
  const int cy = f.height / 2;
  f.cells[cy * f.width + cx] = CellKind::Progenitor;
  return f;
}

void secrete(Field& f, const Genome& g) {
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const CellKind kind = f.kind(x, y);
      if (kind == CellKind::Empty) continue;
      for (size_t m = 0; m < g.morphogens.size(); ++m) {
        const auto& spec = g.morphogens[m];
        f.conc[m](x, y) += kind == CellKind::Progenitor
                               ? spec.secretion_progenitor
                               : spec.secretion_neuron;
      }
    }
  }
}

void diffuse_into(const Grid& grid, const Kernel& kernel, Grid& out) {
  const int w = static_cast<int>(grid.rows());
  const int h = static_cast<int>(grid.cols());
  const int kw = static_cast<int>(kernel.rows());
  const int kh = static_cast<int>(kernel.cols());
  if (kw > w || kh > h)
    throw ConfigError("diffusion kernel larger than the field");
  const int rx = kw / 2;
  const int ry = kh / 2;

  // Wrap once into a padded copy, then accumulate unwrapped kernel shifts.
  Grid padded(w + 2 * rx, h + 2 * ry);
  for (int j = 0; j < h + 2 * ry; ++j) {
    const int js = wrap(j - ry, h);
    for (int i = 0; i < w + 2 * rx; ++i)
      padded(i, j) = grid(wrap(i - rx, w), js);
  }
  out = Grid::Zero(w, h);
  for (int a = 0; a < kw; ++a) {
    for (int b = 0; b < kh; ++b) {
      const double kv = kernel(a, b);
      if (kv == 0.0) continue;
      // grid((i - (a - rx)) mod w, (j - (b - ry)) mod h) lives at padded
      // offset (2rx - a, 2ry - b).
      out += kv * padded.block(2 * rx - a, 2 * ry - b, w, h);
    }
  }
}

Grid diffuse(const Grid& grid, const Kernel& kernel) {
  Grid out;
  diffuse_into(grid, kernel, out);
  return out;
}

void inhibit(Field& f, const Genome& g) {
  const size_t count = g.morphogens.size();
  if (count <= 1) return;
  const std::vector<Grid> snapshot = f.conc;
  for (size_t m = 0; m < count; ++m) {
    const auto& row = g.morphogens[m].inhibition_row;
    Grid factor = Grid::Ones(f.width, f.height);
    for (size_t n = 0; n < count; ++n) {
      if (n == m || row[n] == 0.0) continue;
      factor *= (1.0 - row[n] * snapshot[n]).max(0.0);
    }
    f.conc[m] = snapshot[m] * factor;
  }
}

void apply_cell_fates(Field& f, const Genome& g, GrownGraph& graph) {
  // Only cells present at phase start act; cells placed during the scan wait
  // until the next step (but do occupy their position immediately).
  const std::vector<CellKind> snapshot = f.cells;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const CellKind kind = snapshot[y * f.width + x];
      if (kind == CellKind::Progenitor) {
        const double division_signal =
            f.conc[g.fates.division_morphogen](x, y);
        if (division_signal >= g.fates.division_threshold) {
          int free_slot = -1;
          for (int n = 0; n < 4; ++n) {
            const int nx = wrap(x + kNeighborDx[n], f.width);
            const int ny = wrap(y + kNeighborDy[n], f.height);
            if (f.kind(nx, ny) == CellKind::Empty) {
              free_slot = ny * f.width + nx;
              break;
            }
          }
          if (free_slot >= 0) {
            f.cells[free_slot] = CellKind::Progenitor;
            continue;
          }
        }
        const double diff_signal =
            f.conc[g.fates.differentiation_morphogen](x, y);
        if (diff_signal >= g.fates.differentiation_threshold) {
          const int32_t id = static_cast<int32_t>(f.neuron_pos.size());
          f.cells[y * f.width + x] = CellKind::Neuron;
          f.neuron_ids[y * f.width + x] = id;
          f.neuron_pos.emplace_back(x, y);
          f.axon_active.push_back(0);
          graph.node_count = id + 1;
          graph.node_positions.emplace_back(x, y);
        }
      } else if (kind == CellKind::Neuron) {
        const int32_t id = f.neuron_at(x, y);
        if (!f.axon_active[id] &&
            f.conc[g.fates.axon_init_morphogen](x, y) >=
                g.fates.axon_init_threshold) {
          f.axons.push_back(ActiveAxon{id, Eigen::Vector2i(x, y), 0, false});
          f.axon_active[id] = 1;
        }
      }
    }
  }
}

void grow_axons(Field& f, const Genome& g, GrownGraph& graph) {
  const Grid& guidance = f.conc[g.axon.guidance_morphogen];

  // Existing edge set for duplicate suppression.
  std::unordered_set<uint64_t> existing;
  existing.reserve(graph.edges.size() * 2);
  for (const auto& e : graph.edges) existing.insert(edge_key(e.src, e.tgt));

  for (auto& axon : f.axons) {
    // Strict gradient ascent; a flat or descending neighborhood stalls the
    // axon and retires it.
    const double here = guidance(axon.head.x(), axon.head.y());
    int best = -1;
    double best_value = here;
    for (int n = 0; n < 4; ++n) {
      const int nx = wrap(axon.head.x() + kNeighborDx[n], f.width);
      const int ny = wrap(axon.head.y() + kNeighborDy[n], f.height);
      const double v = guidance(nx, ny);
      if (v > best_value) {
        best_value = v;
        best = n;
      }
    }
    if (best < 0) {
      axon.retired = true;
      f.axon_active[axon.source] = 0;
      continue;
    }
    axon.head.x() = wrap(axon.head.x() + kNeighborDx[best], f.width);
    axon.head.y() = wrap(axon.head.y() + kNeighborDy[best], f.height);
    ++axon.length;

    const int32_t target = f.neuron_at(axon.head.x(), axon.head.y());
    if (target >= 0 && target != axon.source &&
        best_value >= g.axon.connection_threshold) {
      if (existing.insert(edge_key(axon.source, target)).second) {
        const double d = torus_distance(f.neuron_pos[axon.source],
                                        f.neuron_pos[target], f.width, f.height);
        const double w = std::min(1.0, std::max(0.01, best_value / (1.0 + d)));
        graph.edges.push_back(Edge{axon.source, target, w});
      }
      axon.retired = true;
      f.axon_active[axon.source] = 0;
      continue;
    }
    if (axon.length >= g.axon.max_length) {
      axon.retired = true;
      f.axon_active[axon.source] = 0;
    }
  }
  std::erase_if(f.axons, [](const ActiveAxon& a) { return a.retired; });
}

void rescale_weights(const Field& f, const Genome& g, GrownGraph& graph) {
  const Grid& guidance = f.conc[g.axon.guidance_morphogen];
  for (auto& e : graph.edges) {
    const auto& p = f.neuron_pos[e.tgt];
    const double local = guidance(p.x(), p.y());
    double total = 0.0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        total += guidance(wrap(p.x() + dx, f.width), wrap(p.y() + dy, f.height));
    if (total > 0.0) e.weight = std::max(0.01, local / total);
  }
}

namespace {

TraceFrame capture(const Field& f) {
  TraceFrame frame;
  frame.step = f.step;
  frame.width = f.width;
  frame.height = f.height;
  frame.conc = f.conc;
  frame.cells = f.cells;
  frame.neuron_ids = f.neuron_ids;
  return frame;
}

GrownGraph grow_impl(const Genome& g, const std::vector<int>* trace_steps,
                     DevelopmentTrace* trace) {
  check_valid(g);
  Field f = make_field(g);
  GrownGraph graph;

  const auto want_frame = [&](int step) {
    return trace_steps &&
           std::find(trace_steps->begin(), trace_steps->end(), step) !=
               trace_steps->end();
  };
  if (want_frame(0)) trace->frames.push_back(capture(f));

  Grid scratch;
  for (int t = 0; t < g.growth_iterations; ++t) {
    secrete(f, g);
    for (size_t m = 0; m < g.morphogens.size(); ++m) {
      diffuse_into(f.conc[m], g.morphogens[m].diffusion_kernel, scratch);
      f.conc[m].swap(scratch);
    }
    inhibit(f, g);
    apply_cell_fates(f, g, graph);
    grow_axons(f, g, graph);
    rescale_weights(f, g, graph);
    f.step = t + 1;
    if (want_frame(f.step)) trace->frames.push_back(capture(f));
  }
  return graph;
}

}  // namespace

GrownGraph grow(const Genome& g) { return grow_impl(g, nullptr, nullptr); }

GrownGraph grow(const Genome& g, const std::vector<int>& trace_steps,
                DevelopmentTrace& trace) {
  return grow_impl(g, &trace_steps, &trace);
}

void write_trace_frame(std::ostream& out, const TraceFrame& frame) {
  out << frame.step << ' ' << frame.width << ' ' << frame.height << ' '
      << frame.conc.size() << '\n';
  for (const auto& grid : frame.conc) {
    for (int y = 0; y < frame.height; ++y) {
      for (int x = 0; x < frame.width; ++x) {
        if (x) out << ' ';
        out << grid(x, y);
      }
      out << '\n';
    }
    out << '\n';
  }
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      if (x) out << ' ';
      const CellKind kind = frame.cells[y * frame.width + x];
      if (kind == CellKind::Empty)
        out << '.';
      else if (kind == CellKind::Progenitor)
        out << 'P';
      else
        out << frame.neuron_ids[y * frame.width + x];
    }
    out << '\n';
  }
}

}  // namespace morpho
