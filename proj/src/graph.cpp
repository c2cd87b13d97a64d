#include "morpho/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "morpho/errors.hpp"

namespace morpho {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::vector<int>> out_adjacency(const GrownGraph& g) {
  std::vector<std::vector<int>> adj(g.node_count);
  for (const auto& e : g.edges) adj[e.src].push_back(e.tgt);
  return adj;
}

// Shortest double formatting that parses back to the same value.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

bool operator==(const GrownGraph& a, const GrownGraph& b) {
  if (a.node_count != b.node_count || a.edges != b.edges) return false;
  if (a.node_positions.size() != b.node_positions.size()) return false;
  for (size_t i = 0; i < a.node_positions.size(); ++i)
    if (a.node_positions[i] != b.node_positions[i]) return false;
  return true;
}

std::vector<int> in_degrees(const GrownGraph& g) {
  std::vector<int> deg(g.node_count, 0);
  for (const auto& e : g.edges) ++deg[e.tgt];
  return deg;
}

GraphMetrics metrics(const GrownGraph& g) {
  GraphMetrics m;
  m.n_nodes = g.node_count;
  m.n_edges = static_cast<int>(g.edges.size());

  const auto deg = in_degrees(g);
  m.n_sources = static_cast<int>(std::count(deg.begin(), deg.end(), 0));

  if (g.node_count == 0) {
    m.weakly_connected = false;
    m.diameter = 0;
    return m;
  }

  // Weak connectivity over the undirected projection.
  std::vector<std::vector<int>> undirected(g.node_count);
  for (const auto& e : g.edges) {
    undirected[e.src].push_back(e.tgt);
    undirected[e.tgt].push_back(e.src);
  }
  std::vector<char> seen(g.node_count, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u : undirected[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        queue.push_back(u);
      }
    }
  }
  m.weakly_connected = reached == g.node_count;

  if (g.node_count <= 1) {
    m.diameter = 0;
    return m;
  }

  // BFS from every node; diameter is the longest finite shortest path over
  // ordered pairs, floored at 1 so it stays usable as a horizon.
  const auto adj = out_adjacency(g);
  int diameter = 1;
  std::vector<int> dist(g.node_count);
  for (int s = 0; s < g.node_count; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int u : adj[v]) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          diameter = std::max(diameter, dist[u]);
          q.push_back(u);
        }
      }
    }
  }
  m.diameter = diameter;
  return m;
}

std::string to_edge_json(const GrownGraph& g) {
  ordered_json j;
  ordered_json nodes = ordered_json::array();
  for (int32_t id = 0; id < g.node_count; ++id) {
    const auto& p = g.node_positions[id];
    nodes.push_back({{"id", id}, {"x", p.x()}, {"y", p.y()}});
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"s", e.src}, {"t", e.tgt}, {"w", e.weight}});
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  return j.dump(2);
}

GrownGraph from_edge_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("graph json: ") + e.what());
  }
  try {
    GrownGraph g;
    const auto& nodes = j.at("nodes");
    g.node_count = static_cast<int32_t>(nodes.size());
    g.node_positions.resize(g.node_count);
    for (const auto& n : nodes) {
      const int32_t id = n.at("id").get<int32_t>();
      if (id < 0 || id >= g.node_count)
        throw ConfigError("graph json: node ids must be dense in [0, n)");
      g.node_positions[id] =
          Eigen::Vector2i(n.at("x").get<int>(), n.at("y").get<int>());
    }
    for (const auto& e : j.at("edges")) {
      Edge edge{e.at("s").get<int32_t>(), e.at("t").get<int32_t>(),
                e.at("w").get<double>()};
      if (edge.src < 0 || edge.src >= g.node_count || edge.tgt < 0 ||
          edge.tgt >= g.node_count)
        throw ConfigError("graph json: edge endpoint out of range");
      g.edges.push_back(edge);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph json: ") + e.what());
  }
}

std::string to_dot(const GrownGraph& g) {
  std::ostringstream out;
  out << "digraph grown {\n";
  for (int32_t id = 0; id < g.node_count; ++id) {
    const auto& p = g.node_positions[id];
    out << "  " << id << " [pos=\"" << p.x() << "," << p.y() << "\"];\n";
  }
  for (const auto& e : g.edges)
    out << "  " << e.src << " -> " << e.tgt << " [label="
        << format_double(e.weight) << "];\n";
  out << "}\n";
  return out.str();
}

std::string export_graph(const GrownGraph& g, const std::string& format) {
  if (format == "edge-json") return to_edge_json(g);
  if (format == "dot") return to_dot(g);
  throw ConfigError("unknown graph format: " + format);
}

GrownGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_edge_json(buf.str());
}

void save_graph_file(const GrownGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << to_edge_json(g) << '\n';
}

}  // namespace morpho
