#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace morpho {

struct Edge {
  int32_t src = 0;
  int32_t tgt = 0;
  double weight = 0.0;
};

inline bool operator==(const Edge& a, const Edge& b) {
  return a.src == b.src && a.tgt == b.tgt && a.weight == b.weight;
}

// Directed weighted graph produced by development. Node ids are creation
// order and dense in [0, node_count); edges keep creation order and are
// unique per (src, tgt); weights live in [0.01, 1.0].
struct GrownGraph {
  int32_t node_count = 0;
  std::vector<Edge> edges;
  std::vector<Eigen::Vector2i> node_positions;  // field coordinates per node
};

bool operator==(const GrownGraph& a, const GrownGraph& b);

struct GraphMetrics {
  int n_nodes = 0;
  int n_edges = 0;
  int n_sources = 0;  // nodes with zero in-degree
  bool weakly_connected = false;
  int diameter = 0;  // max finite directed shortest-path length
};

// Conventions: the empty graph counts as not weakly connected; diameter is 0
// for graphs with at most one node and otherwise at least 1 even without
// edges (it is used as a propagation horizon).
GraphMetrics metrics(const GrownGraph& g);

std::vector<int> in_degrees(const GrownGraph& g);

// Formats: "edge-json" round-trips exactly; "dot" is for rendering.
std::string to_edge_json(const GrownGraph& g);
GrownGraph from_edge_json(const std::string& text);
std::string to_dot(const GrownGraph& g);

// format is "edge-json" or "dot"; anything else raises ConfigError.
std::string export_graph(const GrownGraph& g, const std::string& format);

GrownGraph load_graph_file(const std::string& path);
void save_graph_file(const GrownGraph& g, const std::string& path);

}  // namespace morpho
