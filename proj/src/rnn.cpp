#include "morpho/rnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "morpho/errors.hpp"

namespace morpho {
namespace {

double apply_activation(double v, ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Tanh: return std::tanh(v);
    case ActivationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
    default: return v;
  }
}

}  // namespace

std::optional<IoAssignment> select_io(const GrownGraph& g, int d_in,
                                      int d_out) {
  if (d_in + d_out > g.node_count) return std::nullopt;

  const auto deg = in_degrees(g);
  std::vector<int32_t> order(g.node_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&deg](int32_t a, int32_t b) {
    return deg[a] < deg[b];
  });

  IoAssignment io;
  io.inputs.assign(order.begin(), order.begin() + d_in);

  std::vector<char> is_input(g.node_count, 0);
  for (int32_t id : io.inputs) is_input[id] = 1;
  for (int32_t id = g.node_count - 1;
       id >= 0 && static_cast<int>(io.outputs.size()) < d_out; --id) {
    if (!is_input[id]) io.outputs.push_back(id);
  }
  std::reverse(io.outputs.begin(), io.outputs.end());
  return io;
}

Rnn::Rnn(const GrownGraph& g, const RnnConfig& cfg) : cfg_(cfg) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.edges.size());
  for (const auto& e : g.edges) triplets.emplace_back(e.tgt, e.src, e.weight);
  weights_.resize(g.node_count, g.node_count);
  weights_.setFromTriplets(triplets.begin(), triplets.end());
  steps_ = std::max(1, metrics(g).diameter + cfg.extra_steps);
}

Eigen::VectorXd Rnn::propagate(const Eigen::VectorXd& x0) const {
  if (x0.size() != weights_.rows())
    throw ContractError("activation vector size does not match node count");
  Eigen::VectorXd x = x0;
  Eigen::VectorXd wx(x.size());
  for (int t = 0; t < steps_; ++t) {
    wx.noalias() = weights_ * x;
    for (Eigen::Index i = 0; i < wx.size(); ++i)
      wx[i] = apply_activation(wx[i], cfg_.activation);
    if (cfg_.mode == UpdateMode::Accumulation)
      x += wx;
    else
      x = wx;
  }
  return x;
}

Eigen::VectorXd Rnn::act(const IoAssignment& io,
                         const Eigen::VectorXd& observation) const {
  if (observation.size() != static_cast<Eigen::Index>(io.inputs.size()))
    throw ContractError("observation size does not match input count");
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(weights_.rows());
  for (size_t i = 0; i < io.inputs.size(); ++i)
    x0[io.inputs[i]] = observation[static_cast<Eigen::Index>(i)];
  const Eigen::VectorXd x = propagate(x0);
  Eigen::VectorXd out(io.outputs.size());
  for (size_t i = 0; i < io.outputs.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = x[io.outputs[i]];
  return out;
}

}  // namespace morpho
