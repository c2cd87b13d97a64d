#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "morpho/errors.hpp"
#include "morpho/morphogenesis.hpp"
#include "oracles/reference_growth.hpp"

using namespace morpho;

namespace {

// Inert single-morphogen genome: identity kernel, zero secretion, thresholds
// far above anything reachable.
Genome inert_genome(int morphogens = 1, int w = 7, int h = 7) {
  Genome g;
  g.field_width = w;
  g.field_height = h;
  g.growth_iterations = 1;
  for (int m = 0; m < morphogens; ++m) {
    MorphogenSpec spec;
    spec.secretion_progenitor = 0.0;
    spec.secretion_neuron = 0.0;
    spec.diffusion_kernel = Kernel::Zero(3, 3);
    spec.diffusion_kernel(1, 1) = 1.0;
    spec.inhibition_row.assign(morphogens, 0.0);
    g.morphogens.push_back(std::move(spec));
  }
  g.fates.division_threshold = 1e9;
  g.fates.differentiation_threshold = 1e9;
  g.fates.axon_init_threshold = 1e9;
  g.axon.connection_threshold = 0.0;
  g.axon.max_length = 10;
  REQUIRE(!validity_error(g));
  return g;
}

int cell_index(const Field& f, int x, int y) { return y * f.width + x; }

int place_neuron(Field& f, GrownGraph& graph, int x, int y) {
  const int id = f.neuron_count();
  f.cells[cell_index(f, x, y)] = CellKind::Neuron;
  f.neuron_ids[cell_index(f, x, y)] = id;
  f.neuron_pos.emplace_back(x, y);
  f.axon_active.push_back(0);
  graph.node_count = id + 1;
  graph.node_positions.emplace_back(x, y);
  return id;
}

void clear_center(Field& f) {
  f.cells[cell_index(f, f.width / 2, f.height / 2)] = CellKind::Empty;
}

// Direct-sum toroidal convolution, independent of the library loop.
Grid conv_oracle(const Grid& in, const Kernel& k) {
  const int w = static_cast<int>(in.rows());
  const int h = static_cast<int>(in.cols());
  const int ra = static_cast<int>(k.rows()) / 2;
  const int rb = static_cast<int>(k.cols()) / 2;
  Grid out(w, h);
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) {
      double acc = 0.0;
      for (int a = 0; a < k.rows(); ++a)
        for (int b = 0; b < k.cols(); ++b) {
          int sx = (x - (a - ra)) % w;
          if (sx < 0) sx += w;
          int sy = (y - (b - rb)) % h;
          if (sy < 0) sy += h;
          acc += k(a, b) * in(sx, sy);
        }
      out(x, y) = acc;
    }
  return out;
}

}  // namespace

TEST_CASE("make_field starts with one centered progenitor") {
  const Genome g = inert_genome(2, 9, 5);
  const Field f = make_field(g);
  CHECK(f.width == 9);
  CHECK(f.height == 5);
  CHECK(f.kind(4, 2) == CellKind::Progenitor);
  int occupied = 0;
  for (const auto c : f.cells) occupied += c != CellKind::Empty;
  CHECK(occupied == 1);
  for (const auto& grid : f.conc) CHECK(grid.abs().maxCoeff() == 0.0);
}

TEST_CASE("secrete adds nothing on an empty field") {
  Genome g = inert_genome();
  g.morphogens[0].secretion_progenitor = 0.7;
  Field f = make_field(g);
  clear_center(f);
  secrete(f, g);
  CHECK(f.conc[0].abs().maxCoeff() == 0.0);
}

TEST_CASE("secrete adds the progenitor rate at its own cell only") {
  Genome g = inert_genome();
  g.morphogens[0].secretion_progenitor = 0.5;
  Field f = make_field(g);
  secrete(f, g);
  CHECK(f.conc[0](3, 3) == 0.5);
  CHECK(f.conc[0].sum() == 0.5);
}

TEST_CASE("secrete uses each cell type's own rate") {
  Genome g = inert_genome();
  g.morphogens[0].secretion_progenitor = 0.5;
  g.morphogens[0].secretion_neuron = 0.2;
  Field f = make_field(g);
  GrownGraph graph;
  place_neuron(f, graph, 1, 1);
  secrete(f, g);
  CHECK(f.conc[0](3, 3) == 0.5);  // progenitor
  CHECK(f.conc[0](1, 1) == 0.2);  // neuron
  CHECK(f.conc[0].sum() == 0.7);
}

TEST_CASE("identity kernel leaves the grid unchanged") {
  Kernel k = Kernel::Zero(3, 3);
  k(1, 1) = 1.0;
  Rng rng(5);
  Grid grid(6, 4);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 4; ++y) grid(x, y) = rng.uniform();
  const Grid out = diffuse(grid, k);
  CHECK((out == grid).all());
}

TEST_CASE("mass-preserving kernel keeps a uniform grid fixed") {
  Kernel k = Kernel::Zero(3, 3);
  k(0, 1) = k(1, 0) = k(1, 2) = k(2, 1) = 0.25;  // sums to exactly 1
  const Grid grid = Grid::Constant(5, 5, 2.0);
  const Grid out = diffuse(grid, k);
  CHECK((out == grid).all());
}

TEST_CASE("impulse spreads into a wrapped plateau under a uniform kernel") {
  const Kernel k = Kernel::Constant(3, 3, 1.0 / 9.0);
  Grid grid = Grid::Zero(5, 5);
  grid(0, 0) = 1.0;  // corner, so the plateau wraps
  const Grid out = diffuse(grid, k);
  const Grid want = conv_oracle(grid, k);
  CHECK(((out - want).abs() < 1e-15).all());
  CHECK(out(0, 0) == doctest::Approx(1.0 / 9.0));
  CHECK(out(4, 4) == doctest::Approx(1.0 / 9.0));  // wrapped corner
  CHECK(out(2, 2) == 0.0);
}

TEST_CASE("diffusion matches the direct-sum oracle on random inputs") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = static_cast<int>(rng.uniform_int(3, 9));
    const int h = static_cast<int>(rng.uniform_int(3, 9));
    const int ks = 1 + 2 * static_cast<int>(rng.uniform_int(0, 1));
    Grid grid(w, h);
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < h; ++y) grid(x, y) = rng.uniform();
    Kernel k(ks, ks);
    for (int a = 0; a < ks; ++a)
      for (int b = 0; b < ks; ++b) k(a, b) = rng.uniform();
    k /= k.sum() * (1.0 + rng.uniform());  // sum in (0, 1]
    const Grid out = diffuse(grid, k);
    const Grid want = conv_oracle(grid, k);
    CHECK(((out - want).abs() < 1e-12).all());
  }
}

TEST_CASE("oversized kernels are rejected") {
  const Grid grid = Grid::Zero(3, 3);
  const Kernel k = Kernel::Constant(5, 5, 0.01);
  CHECK_THROWS_AS(diffuse(grid, k), ConfigError);
}

TEST_CASE("diffusion scales total mass by the kernel sum") {
  Rng rng(13);
  Kernel k(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) k(a, b) = rng.uniform();
  k /= k.sum() / 0.75;  // sum = 0.75
  Grid grid(8, 8);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) grid(x, y) = rng.uniform();
  double total = grid.sum();
  for (int step = 0; step < 5; ++step) {
    grid = diffuse(grid, k);
    total *= k.sum();
    CHECK(grid.sum() == doctest::Approx(total).epsilon(1e-9));
  }
}

TEST_CASE("inhibition with zero coefficients is a no-op") {
  Genome g = inert_genome(3);
  Field f = make_field(g);
  f.conc[0].setConstant(1.5);
  f.conc[1].setConstant(0.5);
  f.conc[2].setConstant(2.0);
  inhibit(f, g);
  CHECK((f.conc[0] == 1.5).all());
  CHECK((f.conc[1] == 0.5).all());
  CHECK((f.conc[2] == 2.0).all());
}

TEST_CASE("inhibition applies the clamped product formula") {
  Genome g = inert_genome(2);
  g.morphogens[0].inhibition_row[1] = 0.5;
  Field f = make_field(g);
  f.conc[0].setConstant(1.0);
  f.conc[1].setConstant(1.0);
  inhibit(f, g);
  CHECK((f.conc[0] == 0.5).all());  // 1 * (1 - 0.5 * 1)
  CHECK((f.conc[1] == 1.0).all());  // no inhibitor configured
}

TEST_CASE("inhibition clamps at zero and matches the scalar oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int count = static_cast<int>(rng.uniform_int(2, 4));
    Genome g = inert_genome(count, 5, 5);
    for (int m = 0; m < count; ++m)
      for (int n = 0; n < count; ++n)
        if (n != m) g.morphogens[m].inhibition_row[n] = rng.uniform();
    Field f = make_field(g);
    for (int m = 0; m < count; ++m)
      for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) f.conc[m](x, y) = rng.uniform(0.0, 6.0);
    const auto before = f.conc;
    inhibit(f, g);
    for (int m = 0; m < count; ++m)
      for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
          double factor = 1.0;
          for (int n = 0; n < count; ++n) {
            if (n == m) continue;
            const double alpha = g.morphogens[m].inhibition_row[n];
            if (alpha == 0.0) continue;
            factor *= std::max(0.0, 1.0 - alpha * before[n](x, y));
          }
          CHECK(f.conc[m](x, y) ==
                doctest::Approx(before[m](x, y) * factor).epsilon(1e-12));
          CHECK(f.conc[m](x, y) >= 0.0);
        }
  }
}

TEST_CASE("progenitor with unmet signals stays put") {
  Genome g = inert_genome();
  Field f = make_field(g);
  GrownGraph graph;
  apply_cell_fates(f, g, graph);
  CHECK(f.kind(3, 3) == CellKind::Progenitor);
  CHECK(graph.node_count == 0);
}

TEST_CASE("division places the new progenitor north first, then east") {
  Genome g = inert_genome();
  g.fates.division_threshold = 0.0;  // always met
  Field f = make_field(g);
  GrownGraph graph;
  apply_cell_fates(f, g, graph);
  CHECK(f.kind(3, 2) == CellKind::Progenitor);  // north of (3,3)

  // Second pass: the north child divides further north, the original cell
  // finds north blocked and goes east.
  apply_cell_fates(f, g, graph);
  CHECK(f.kind(3, 1) == CellKind::Progenitor);
  CHECK(f.kind(4, 3) == CellKind::Progenitor);
  CHECK(graph.node_count == 0);
}

TEST_CASE("newly placed progenitors wait one step before acting") {
  Genome g = inert_genome();
  g.fates.division_threshold = 0.0;
  Field f = make_field(g);
  GrownGraph graph;
  apply_cell_fates(f, g, graph);
  int progenitors = 0;
  for (const auto c : f.cells) progenitors += c == CellKind::Progenitor;
  CHECK(progenitors == 2);  // parent + one child, not a cascade
}

TEST_CASE("an enclosed progenitor cannot divide but may differentiate") {
  Genome g = inert_genome();
  g.fates.division_threshold = 0.0;
  Field f = make_field(g);
  GrownGraph graph;
  for (int n = 0; n < 4; ++n) {
    const int nx[4] = {0, 1, 0, -1};
    const int ny[4] = {-1, 0, 1, 0};
    f.cells[cell_index(f, 3 + nx[n], 3 + ny[n])] = CellKind::Progenitor;
  }
  SUBCASE("differentiation unmet: nothing happens") {
    const auto cells_before = f.cells;
    apply_cell_fates(f, g, graph);
    // The four blockers acted too (they also see division signal met and have
    // free neighbors), so only compare the center.
    CHECK(f.kind(3, 3) == CellKind::Progenitor);
  }
  SUBCASE("differentiation met: center becomes neuron 0") {
    g.fates.differentiation_threshold = 0.0;
    apply_cell_fates(f, g, graph);
    CHECK(f.kind(3, 3) == CellKind::Neuron);
    CHECK(f.neuron_at(3, 3) == 0);
    CHECK(graph.node_count == 1);
    CHECK(graph.node_positions[0] == Eigen::Vector2i(3, 3));
  }
}

TEST_CASE("division takes precedence over differentiation") {
  Genome g = inert_genome();
  g.fates.division_threshold = 0.0;
  g.fates.differentiation_threshold = 0.0;
  Field f = make_field(g);
  GrownGraph graph;
  apply_cell_fates(f, g, graph);
  CHECK(f.kind(3, 3) == CellKind::Progenitor);
  CHECK(graph.node_count == 0);
}

TEST_CASE("differentiation fires when division is unmet") {
  Genome g = inert_genome();
  g.fates.differentiation_threshold = 0.0;
  Field f = make_field(g);
  GrownGraph graph;
  apply_cell_fates(f, g, graph);
  CHECK(f.kind(3, 3) == CellKind::Neuron);
  CHECK(graph.node_count == 1);
}

TEST_CASE("neurons spawn one axon when the init signal is met") {
  Genome g = inert_genome();
  g.fates.axon_init_threshold = 0.5;
  Field f = make_field(g);
  GrownGraph graph;
  clear_center(f);
  place_neuron(f, graph, 2, 2);
  f.conc[0](2, 2) = 0.6;
  apply_cell_fates(f, g, graph);
  REQUIRE(f.axons.size() == 1);
  CHECK(f.axons[0].source == 0);
  CHECK(f.axons[0].head == Eigen::Vector2i(2, 2));
  CHECK(f.axon_active[0] == 1);
  // A second pass may not double-spawn while the axon is active.
  apply_cell_fates(f, g, graph);
  CHECK(f.axons.size() == 1);
}

TEST_CASE("axons climb the gradient and connect with the distance weight") {
  Genome g = inert_genome();
  g.axon.connection_threshold = 0.0;
  g.axon.max_length = 10;
  Field f = make_field(g);
  GrownGraph graph;
  clear_center(f);
  const int a = place_neuron(f, graph, 1, 1);
  const int b = place_neuron(f, graph, 3, 1);
  f.conc[0](1, 1) = 0.1;
  f.conc[0](2, 1) = 0.3;
  f.conc[0](3, 1) = 0.6;
  f.axons.push_back(ActiveAxon{a, Eigen::Vector2i(1, 1), 0, false});
  f.axon_active[a] = 1;

  grow_axons(f, g, graph);  // step to (2,1)
  REQUIRE(graph.edges.empty());
  grow_axons(f, g, graph);  // lands on b
  REQUIRE(graph.edges.size() == 1);
  CHECK(graph.edges[0].src == a);
  CHECK(graph.edges[0].tgt == b);
  CHECK(graph.edges[0].weight == doctest::Approx(0.2));  // 0.6 / (1 + 2)
  CHECK(f.axons.empty());
  CHECK(f.axon_active[a] == 0);
}

TEST_CASE("connection weights clamp into [0.01, 1]") {
  Genome g = inert_genome();
  g.axon.connection_threshold = 0.0;
  Field f = make_field(g);
  GrownGraph graph;
  clear_center(f);
  const int a = place_neuron(f, graph, 1, 1);
  const int b = place_neuron(f, graph, 2, 1);
  SUBCASE("upper clamp") {
    f.conc[0](2, 1) = 3.0;  // 3 / (1 + 1) = 1.5 before the clamp
    f.axons.push_back(ActiveAxon{a, Eigen::Vector2i(1, 1), 0, false});
    f.axon_active[a] = 1;
    grow_axons(f, g, graph);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0].weight == 1.0);
  }
  SUBCASE("lower clamp") {
    f.conc[0](2, 1) = 0.009;  // 0.0045 before the clamp
    f.axons.push_back(ActiveAxon{a, Eigen::Vector2i(1, 1), 0, false});
    f.axon_active[a] = 1;
    grow_axons(f, g, graph);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0].tgt == b);
    CHECK(graph.edges[0].weight == 0.01);
  }
}

TEST_CASE("a flat guidance field stalls every axon") {
  Genome g = inert_genome();
  Field f = make_field(g);
  GrownGraph graph;
  clear_center(f);
  const int a = place_neuron(f, graph, 2, 2);
  f.conc[0].setConstant(0.4);
  f.axons.push_back(ActiveAxon{a, Eigen::Vector2i(2, 2), 0, false});
  f.axon_active[a] = 1;
  grow_axons(f, g, graph);
  CHECK(graph.edges.empty());
  CHECK(f.axons.empty());
  CHECK(f.axon_active[a] == 0);
}

TEST_CASE("axons retire at their step budget") {
  Genome g = inert_genome();
  g.axon.max_length = 1;
  Field f = make_field(g);
  GrownGraph graph;
  clear_center(f);
  const int a = place_neuron(f, graph, 1, 1);
  place_neuron(f, graph, 4, 1);
  for (int x = 0; x < 7; ++x) f.conc[0](x, 1) = 0.1 * (x + 1);
  f.axons.push_back(ActiveAxon{a, Eigen::Vector2i(1, 1), 0, false});
  f.axon_active[a] = 1;
  grow_axons(f, g, graph);  // one step, budget exhausted short of the target
  CHECK(graph.edges.empty());
  CHECK(f.axons.empty());
}

TEST_CASE("axons pass over sub-threshold neurons and do not duplicate edges") {
  Genome g = inert_genome();
  g.axon.connection_threshold = 0.5;
  g.axon.max_length = 10;
  Field f = make_field(g);
  GrownGraph graph;
  clear_center(f);
  const int a = place_neuron(f, graph, 1, 1);
  const int c = place_neuron(f, graph, 2, 1);  // below threshold on the path
  const int b = place_neuron(f, graph, 3, 1);
  f.conc[0](1, 1) = 0.1;
  f.conc[0](2, 1) = 0.4;  // < 0.5: pass over
  f.conc[0](3, 1) = 0.8;

  f.axons.push_back(ActiveAxon{a, Eigen::Vector2i(1, 1), 0, false});
  f.axon_active[a] = 1;
  grow_axons(f, g, graph);
  CHECK(graph.edges.empty());  // sits on c without connecting
  grow_axons(f, g, graph);
  REQUIRE(graph.edges.size() == 1);
  CHECK(graph.edges[0].src == a);
  CHECK(graph.edges[0].tgt == b);

  // Re-spawn: the axon reaches b again but the edge is not re-added.
  f.axons.push_back(ActiveAxon{a, Eigen::Vector2i(1, 1), 0, false});
  f.axon_active[a] = 1;
  grow_axons(f, g, graph);
  grow_axons(f, g, graph);
  CHECK(graph.edges.size() == 1);
  (void)c;
}

TEST_CASE("rescale boundary cases") {
  Genome g = inert_genome();
  Field f = make_field(g);
  GrownGraph graph;
  clear_center(f);
  const int a = place_neuron(f, graph, 1, 1);
  const int b = place_neuron(f, graph, 4, 4);
  graph.edges.push_back(Edge{a, b, 0.5});

  SUBCASE("all concentration at the target cell") {
    f.conc[0](4, 4) = 2.5;
    rescale_weights(f, g, graph);
    CHECK(graph.edges[0].weight == 1.0);
  }
  SUBCASE("zero at the target, mass nearby") {
    f.conc[0](3, 3) = 1.0;
    rescale_weights(f, g, graph);
    CHECK(graph.edges[0].weight == 0.01);
  }
  SUBCASE("uniform neighborhood") {
    f.conc[0].setConstant(0.7);
    rescale_weights(f, g, graph);
    CHECK(graph.edges[0].weight == doctest::Approx(1.0 / 9.0));
  }
  SUBCASE("zero total leaves the weight alone") {
    rescale_weights(f, g, graph);
    CHECK(graph.edges[0].weight == 0.5);
  }
}

TEST_CASE("zero secretion grows an empty graph") {
  Genome g = inert_genome(2, 9, 9);
  g.growth_iterations = 50;
  g.fates.division_threshold = 0.1;
  g.fates.differentiation_threshold = 0.1;
  g.fates.axon_init_threshold = 0.1;
  const GrownGraph graph = grow(g);
  CHECK(graph.node_count == 0);
  CHECK(graph.edges.empty());
}

TEST_CASE("zero differentiation threshold converts the first progenitor") {
  Genome g = inert_genome(1, 9, 9);
  g.growth_iterations = 5;
  g.fates.division_threshold = 1e9;
  g.fates.differentiation_threshold = 0.0;
  g.fates.axon_init_threshold = 0.0;
  const GrownGraph graph = grow(g);
  CHECK(graph.node_count == 1);
  CHECK(graph.edges.empty());  // flat field: axons stall instantly
}

TEST_CASE("grow is deterministic") {
  GenomeBounds bounds;
  bounds.field_width = {9, 12};
  bounds.field_height = {9, 12};
  bounds.growth_iterations = {30, 60};
  Rng rng(1001);
  for (int i = 0; i < 5; ++i) {
    const Genome g = random_genome(bounds, rng);
    CHECK(grow(g) == grow(g));
  }
}

TEST_CASE("growth invariants hold after every phase") {
  GenomeBounds bounds;
  bounds.field_width = {7, 12};
  bounds.field_height = {7, 12};
  bounds.growth_iterations = {20, 40};
  bounds.axon_max_length = {1, 30};
  Rng rng(2002);
  for (int trial = 0; trial < 10; ++trial) {
    const Genome g = random_genome(bounds, rng);
    Field f = make_field(g);
    GrownGraph graph;
    int prev_nodes = 0;
    const auto check_nonneg = [&f] {
      for (const auto& grid : f.conc) REQUIRE(grid.minCoeff() >= 0.0);
    };
    for (int t = 0; t < g.growth_iterations; ++t) {
      secrete(f, g);
      check_nonneg();
      for (size_t m = 0; m < g.morphogens.size(); ++m)
        f.conc[m] = diffuse(f.conc[m], g.morphogens[m].diffusion_kernel);
      check_nonneg();
      inhibit(f, g);
      check_nonneg();
      apply_cell_fates(f, g, graph);
      grow_axons(f, g, graph);
      rescale_weights(f, g, graph);
      check_nonneg();

      REQUIRE(graph.node_count >= prev_nodes);
      prev_nodes = graph.node_count;
      std::set<std::pair<int, int>> seen;
      for (const auto& e : graph.edges) {
        REQUIRE(e.weight >= 0.01);
        REQUIRE(e.weight <= 1.0);
        REQUIRE(e.src >= 0);
        REQUIRE(e.src < graph.node_count);
        REQUIRE(e.tgt >= 0);
        REQUIRE(e.tgt < graph.node_count);
        REQUIRE(e.src != e.tgt);
        REQUIRE(seen.insert({e.src, e.tgt}).second);
      }
      for (const auto& ax : f.axons) REQUIRE(ax.length <= g.axon.max_length);
    }
    // The phase sequence above is exactly what grow() runs.
    CHECK(grow(g) == graph);
  }
}

TEST_CASE("trace frames capture the requested steps") {
  Genome g = inert_genome(1, 5, 5);
  g.growth_iterations = 4;
  g.fates.differentiation_threshold = 0.0;
  DevelopmentTrace trace;
  const GrownGraph graph = grow(g, {0, 2, 4}, trace);
  (void)graph;
  REQUIRE(trace.frames.size() == 3);
  CHECK(trace.frames[0].step == 0);
  CHECK(trace.frames[1].step == 2);
  CHECK(trace.frames[2].step == 4);
  CHECK(trace.frames[0].cells[2 * 5 + 2] == CellKind::Progenitor);
  CHECK(trace.frames[1].cells[2 * 5 + 2] == CellKind::Neuron);

  std::ostringstream out;
  write_trace_frame(out, trace.frames[0]);
  const std::string text = out.str();
  CHECK(text.find("0 5 5 1") == 0);
  CHECK(text.find('P') != std::string::npos);
  std::ostringstream out2;
  write_trace_frame(out2, trace.frames[1]);
  CHECK(out2.str().find('0') != std::string::npos);  // neuron id token
}

TEST_CASE("the reference genome grows exactly the frozen graph") {
  // reference_graph.json was produced once by the straight-line oracle
  // implementation (tests/oracles/reference_growth.cpp) and checked in.
  const std::string dir = MORPHO_TEST_DIR "/fixtures/";
  const Genome g = load_genome_file(dir + "reference_genome.json");
  const GrownGraph frozen = load_graph_file(dir + "reference_graph.json");
  CHECK(frozen.node_count == 53);
  CHECK(frozen.edges.size() == 38);

  std::ifstream in(dir + "reference_genome.json");
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  const oracle::RefGraph ref = oracle::reference_grow(buf.str());
  REQUIRE(ref.node_count == frozen.node_count);
  REQUIRE(ref.edges.size() == frozen.edges.size());
  for (size_t i = 0; i < ref.edges.size(); ++i) {
    CHECK(ref.edges[i].src == frozen.edges[i].src);
    CHECK(ref.edges[i].tgt == frozen.edges[i].tgt);
    CHECK(ref.edges[i].weight == frozen.edges[i].weight);
  }

  const GrownGraph grown = grow(g);
  REQUIRE(grown.node_count == frozen.node_count);
  REQUIRE(grown.edges.size() == frozen.edges.size());
  for (size_t i = 0; i < grown.edges.size(); ++i) {
    CHECK(grown.edges[i].src == frozen.edges[i].src);
    CHECK(grown.edges[i].tgt == frozen.edges[i].tgt);
    CHECK(std::abs(grown.edges[i].weight - frozen.edges[i].weight) <= 1e-12);
  }
  for (int i = 0; i < grown.node_count; ++i)
    CHECK(grown.node_positions[i] == frozen.node_positions[i]);
}

TEST_CASE("torus distance wraps both axes") {
  CHECK(torus_distance({0, 0}, {9, 0}, 10, 10) == doctest::Approx(1.0));
  CHECK(torus_distance({0, 0}, {0, 9}, 10, 10) == doctest::Approx(1.0));
  CHECK(torus_distance({1, 1}, {4, 5}, 10, 10) == doctest::Approx(5.0));
  CHECK(torus_distance({2, 2}, {2, 2}, 10, 10) == 0.0);
}
