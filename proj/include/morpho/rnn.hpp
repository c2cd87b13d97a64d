#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <optional>
#include <vector>

#include "morpho/graph.hpp"

namespace morpho {

// Deterministic input/output role assignment for a grown graph.
struct IoAssignment {
  std::vector<int32_t> inputs;   // ascending in-degree, ties by id
  std::vector<int32_t> outputs;  // last nodes in creation order, inputs skipped
};

enum class UpdateMode { Accumulation, Replacement };
enum class ActivationKind { Tanh, Sigmoid, Identity };

struct RnnConfig {
  UpdateMode mode = UpdateMode::Accumulation;
  ActivationKind activation = ActivationKind::Tanh;
  int extra_steps = 0;  // added to the graph diameter; total steps floor at 1
};

// Inputs are the d_in nodes with the smallest in-degree; outputs are the
// d_out newest nodes, walking backwards over anything already taken as an
// input. Returns nullopt when the graph has fewer than d_in + d_out nodes
// (callers map that to fitness 0).
std::optional<IoAssignment> select_io(const GrownGraph& g, int d_in, int d_out);

// Discrete-time recurrent interpreter of a grown graph. The weight matrix is
// oriented so activation flows along edge direction: step t computes
// f(W x_t) where (W x)[target] sums weight * x[source] over incoming edges.
class Rnn {
 public:
  Rnn(const GrownGraph& g, const RnnConfig& cfg);

  // Runs the configured number of steps from x0 (accumulation:
  // x <- x + f(Wx); replacement: x <- f(Wx)). Throws ContractError on a
  // dimension mismatch.
  Eigen::VectorXd propagate(const Eigen::VectorXd& x0) const;

  // Builds x0 with the observation at the input nodes and zeros elsewhere
  // (state resets on every call), propagates, and reads the output nodes.
  Eigen::VectorXd act(const IoAssignment& io,
                      const Eigen::VectorXd& observation) const;

  int steps() const { return steps_; }
  int size() const { return static_cast<int>(weights_.rows()); }
  const Eigen::SparseMatrix<double>& weights() const { return weights_; }

 private:
  Eigen::SparseMatrix<double> weights_;
  RnnConfig cfg_;
  int steps_ = 1;
};

}  // namespace morpho
