#include <doctest.h>

#include <cmath>

#include "morpho/errors.hpp"
#include "morpho/genome.hpp"
#include "morpho/morphogenesis.hpp"
#include "morpho/rnn.hpp"
#include "oracles/brute_force.hpp"
#include "test_helpers.hpp"

using namespace morpho;

namespace {

GrownGraph six_node_fixture() {
  // In-degrees: 0:0, 1:1, 2:2, 3:3, 4:1, 5:2 (all pair-distinct enough).
  GrownGraph g;
  g.node_count = 6;
  for (int i = 0; i < 6; ++i) g.node_positions.emplace_back(i, 0);
  g.edges = {{0, 1, 0.5}, {0, 2, 0.5}, {1, 2, 0.5}, {0, 3, 0.5},
             {1, 3, 0.5}, {2, 3, 0.5}, {3, 4, 0.5}, {4, 5, 0.5},
             {0, 5, 0.5}};
  return g;
}

}  // namespace

TEST_CASE("select_io picks lowest in-degree inputs and newest outputs") {
  const GrownGraph g = six_node_fixture();
  const auto io = select_io(g, 4, 2);
  REQUIRE(io);
  // In-degrees: [0,1,2,3,1,2] -> sorted (deg, id): 0, 1, 4, 2, 5, 3.
  CHECK(io->inputs == std::vector<int32_t>{0, 1, 4, 2});
  // Newest ids skipping inputs: 5, 3.
  CHECK(io->outputs == std::vector<int32_t>{3, 5});
}

TEST_CASE("select_io partitions the graph at the boundary") {
  const GrownGraph g = six_node_fixture();
  const auto io = select_io(g, 4, 2);
  REQUIRE(io);
  std::vector<char> used(6, 0);
  for (int v : io->inputs) used[v] = 1;
  for (int v : io->outputs) {
    CHECK(!used[v]);
    used[v] = 1;
  }
  for (char u : used) CHECK(u == 1);
}

TEST_CASE("select_io refuses too-small graphs") {
  const GrownGraph g = six_node_fixture();
  CHECK(!select_io(g, 4, 3));
  CHECK(select_io(g, 4, 2));
}

TEST_CASE("select_io matches the reference selector on random graphs") {
  Rng rng(404);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(6, 14));
    const int m = static_cast<int>(rng.uniform_int(0, std::min(n * (n - 1), 30)));
    const GrownGraph g = testutil::random_digraph(n, m, rng);
    const int d_in = static_cast<int>(rng.uniform_int(1, 4));
    const int d_out = static_cast<int>(rng.uniform_int(1, 2));
    const auto io = select_io(g, d_in, d_out);
    REQUIRE(io);
    const auto ref = oracle::reference_select_io(g, d_in, d_out);
    CHECK(std::vector<int>(io->inputs.begin(), io->inputs.end()) == ref.inputs);
    CHECK(std::vector<int>(io->outputs.begin(), io->outputs.end()) ==
          ref.outputs);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("replacement mode with zero weights collapses to zero") {
  GrownGraph g;
  g.node_count = 3;
  for (int i = 0; i < 3; ++i) g.node_positions.emplace_back(i, 0);
  RnnConfig cfg;
  cfg.mode = UpdateMode::Replacement;
  const Rnn rnn(g, cfg);
  Eigen::VectorXd x0(3);
  x0 << 1.0, -2.0, 0.5;
  const Eigen::VectorXd x = rnn.propagate(x0);
  CHECK(x.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a two-node chain computes tanh of the weighted input") {
  GrownGraph g;
  g.node_count = 2;
  g.node_positions = {{0, 0}, {1, 0}};
  g.edges = {{0, 1, 1.0}};
  RnnConfig cfg;
  cfg.mode = UpdateMode::Replacement;
  const Rnn rnn(g, cfg);
  CHECK(rnn.steps() == 1);  // diameter 1
  Eigen::VectorXd x0(2);
  x0 << 1.0, 0.0;
  const Eigen::VectorXd x = rnn.propagate(x0);
  CHECK(x[0] == 0.0);
  CHECK(x[1] == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
}

TEST_CASE("accumulation with zero weights preserves the state") {
  GrownGraph g;
  g.node_count = 4;
  for (int i = 0; i < 4; ++i) g.node_positions.emplace_back(i, 0);
  RnnConfig cfg;
  cfg.extra_steps = 7;
  const Rnn rnn(g, cfg);
  Eigen::VectorXd x0(4);
  x0 << 0.3, -0.4, 2.0, 0.0;
  CHECK((rnn.propagate(x0) - x0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("propagate rejects mismatched dimensions") {
  const Rnn rnn(six_node_fixture(), RnnConfig{});
  CHECK_THROWS_AS(rnn.propagate(Eigen::VectorXd::Zero(5)), ContractError);
}

TEST_CASE("act zeroes non-input nodes and reads outputs in order") {
  const GrownGraph g = six_node_fixture();
  const auto io = select_io(g, 4, 2);
  REQUIRE(io);
  const Rnn rnn(g, RnnConfig{});
  Eigen::VectorXd obs(4);
  obs << 0.1, 0.2, 0.3, 0.4;
  const Eigen::VectorXd out = rnn.act(*io, obs);
  CHECK(out.size() == 2);

  // Same answer from the dense oracle.
  std::vector<double> x0(6, 0.0);
  for (size_t i = 0; i < io->inputs.size(); ++i) x0[io->inputs[i]] = obs[i];
  const auto ref = oracle::dense_propagate(g, x0, rnn.steps(), true);
  CHECK(out[0] == doctest::Approx(ref[io->outputs[0]]).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(ref[io->outputs[1]]).epsilon(1e-12));
}

TEST_CASE("no path from inputs to outputs gives zero activations") {
  // 0 -> 1 only; node 2 isolated and newest, so it becomes the output.
  GrownGraph g;
  g.node_count = 3;
  g.node_positions = {{0, 0}, {1, 0}, {2, 0}};
  g.edges = {{0, 1, 0.9}};
  const auto io = select_io(g, 1, 1);
  REQUIRE(io);
  CHECK(io->outputs == std::vector<int32_t>{2});
  RnnConfig cfg;
  cfg.mode = UpdateMode::Replacement;
  const Rnn rnn(g, cfg);
  Eigen::VectorXd obs(1);
  obs << 0.75;
  CHECK(rnn.act(*io, obs)[0] == 0.0);
}

TEST_CASE("zero observations give zero outputs") {
  const GrownGraph g = six_node_fixture();
  const auto io = select_io(g, 4, 2);
  const Rnn rnn(g, RnnConfig{});
  CHECK(rnn.act(*io, Eigen::VectorXd::Zero(4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sparse propagation matches the dense oracle") {
  Rng rng(505);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 12));
    const int m = static_cast<int>(rng.uniform_int(0, std::min(n * (n - 1), 24)));
    const GrownGraph g = testutil::random_digraph(n, m, rng);
    const bool accumulation = rng.bernoulli(0.5);
    RnnConfig cfg;
    cfg.mode = accumulation ? UpdateMode::Accumulation : UpdateMode::Replacement;
    cfg.extra_steps = static_cast<int>(rng.uniform_int(0, 3));
    const Rnn rnn(g, cfg);
    std::vector<double> x0(n);
    Eigen::VectorXd x0v(n);
    for (int i = 0; i < n; ++i) x0v[i] = x0[i] = rng.uniform(-1.0, 1.0);
    const auto want = oracle::dense_propagate(g, x0, rnn.steps(), accumulation);
    const Eigen::VectorXd got = rnn.propagate(x0v);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(got[i] - want[i]) <= 1e-12);
  }
}

TEST_CASE("activations stay inside the tanh envelope") {
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(2, 10));
    const int m = static_cast<int>(rng.uniform_int(1, std::min(n * (n - 1), 20)));
    const GrownGraph g = testutil::random_digraph(n, m, rng);
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0[i] = rng.uniform(-1.0, 1.0);

    RnnConfig acc;
    const Rnn rnn_acc(g, acc);
    // x gains at most 1 per step on top of the start value.
    const double bound =
        x0.cwiseAbs().maxCoeff() + static_cast<double>(rnn_acc.steps());
    CHECK(rnn_acc.propagate(x0).cwiseAbs().maxCoeff() <= bound + 1e-12);

    RnnConfig rep;
    rep.mode = UpdateMode::Replacement;
    const Rnn rnn_rep(g, rep);
    CHECK(rnn_rep.propagate(x0).cwiseAbs().maxCoeff() <= 1.0);
  }
}

TEST_CASE("propagation horizon floors at one step") {
  GrownGraph g;
  g.node_count = 2;
  g.node_positions = {{0, 0}, {1, 0}};
  const Rnn rnn(g, RnnConfig{});
  CHECK(rnn.steps() == 1);
}
