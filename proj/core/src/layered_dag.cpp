#include "lacg/layered_dag.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include <nlohmann/json.hpp>

namespace lacg {

LayeredDAG make_layered_dag(int layers, int width) {
  if (layers < 1 || width < 1) {
    throw std::invalid_argument("make_layered_dag: layers and width must be >= 1");
  }
  LayeredDAG g;
  g.num_nodes = layers * width + 2;
  g.source = 0;
  g.sink = g.num_nodes - 1;
  auto node = [width](int layer, int i) { return 1 + layer * width + i; };
  for (int i = 0; i < width; ++i) g.edges.emplace_back(g.source, node(0, i));
  for (int layer = 0; layer + 1 < layers; ++layer) {
    for (int i = 0; i < width; ++i) {
      for (int j = 0; j < width; ++j) g.edges.emplace_back(node(layer, i), node(layer + 1, j));
    }
  }
  for (int i = 0; i < width; ++i) g.edges.emplace_back(node(layers - 1, i), g.sink);
  return g;
}

DagIndex DagIndex::build(const LayeredDAG& graph) {
  const int n = graph.num_nodes;
  if (n < 2) throw StructuralError("DAG needs at least two nodes");
  if (graph.source < 0 || graph.source >= n || graph.sink < 0 || graph.sink >= n ||
      graph.source == graph.sink) {
    throw StructuralError("DAG source/sink out of range or equal");
  }
  DagIndex index;
  index.out_edges.assign(n, {});
  std::vector<int> indegree(n, 0);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto [u, v] = graph.edges[e];
    if (u < 0 || u >= n || v < 0 || v >= n || u == v) {
      throw StructuralError("DAG edge " + std::to_string(e) + " has invalid endpoints");
    }
    index.out_edges[u].push_back(static_cast<int>(e));
    ++indegree[v];
  }
  // Kahn's algorithm, lowest node id first for a reproducible order.
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::make_heap(ready.begin(), ready.end(), std::greater<>());
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), std::greater<>());
    const int u = ready.back();
    ready.pop_back();
    index.topo_order.push_back(u);
    for (int e : index.out_edges[u]) {
      const int v = graph.edges[e].second;
      if (--indegree[v] == 0) {
        ready.push_back(v);
        std::push_heap(ready.begin(), ready.end(), std::greater<>());
      }
    }
  }
  if (static_cast<int>(index.topo_order.size()) != n) {
    throw StructuralError("graph contains a directed cycle");
  }

  std::vector<char> reached(n, 0);
  reached[graph.source] = 1;
  for (int u : index.topo_order) {
    if (!reached[u]) continue;
    for (int e : index.out_edges[u]) reached[graph.edges[e].second] = 1;
  }
  if (!reached[graph.sink]) throw StructuralError("sink is not reachable from source");
  return index;
}

std::vector<int> shortest_path_edges(const LayeredDAG& graph, const DagIndex& index,
                                     const Eigen::VectorXd& cost) {
  if (cost.size() != static_cast<Eigen::Index>(graph.edges.size())) {
    throw std::invalid_argument("shortest_path_edges: cost dimension must equal edge count");
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.num_nodes, inf);
  std::vector<int> via(graph.num_nodes, -1);
  dist[graph.source] = 0.0;
  for (int u : index.topo_order) {
    if (dist[u] == inf) continue;
    for (int e : index.out_edges[u]) {
      const int v = graph.edges[e].second;
      const double candidate = dist[u] + cost[e];
      if (candidate < dist[v]) {
        dist[v] = candidate;
        via[v] = e;
      }
    }
  }
  if (dist[graph.sink] == inf) throw StructuralError("sink is not reachable from source");

  std::vector<int> path;
  for (int v = graph.sink; v != graph.source;) {
    const int e = via[v];
    path.push_back(e);
    v = graph.edges[e].first;
  }
  std::sort(path.begin(), path.end());
  return path;
}

std::vector<std::vector<int>> enumerate_paths(const LayeredDAG& graph, const DagIndex& index,
                                              std::size_t limit) {
  std::vector<std::vector<int>> paths;
  std::vector<int> stack_edges;
  // Iterative DFS over (node, next out-edge position).
  std::vector<std::pair<int, std::size_t>> frames{{graph.source, 0}};
  while (!frames.empty() && paths.size() <= limit) {
    auto& [u, pos] = frames.back();
    if (u == graph.sink) {
      auto p = stack_edges;
      std::sort(p.begin(), p.end());
      paths.push_back(std::move(p));
      frames.pop_back();
      if (!stack_edges.empty()) stack_edges.pop_back();
      continue;
    }
    if (pos == index.out_edges[u].size()) {
      frames.pop_back();
      if (!stack_edges.empty()) stack_edges.pop_back();
      continue;
    }
    const int e = index.out_edges[u][pos++];
    stack_edges.push_back(e);
    frames.emplace_back(graph.edges[e].second, 0);
  }
  return paths;
}

std::string to_json(const LayeredDAG& graph) {
  nlohmann::json j;
  j["num_nodes"] = graph.num_nodes;
  j["edges"] = nlohmann::json::array();
  for (const auto& [u, v] : graph.edges) j["edges"].push_back({u, v});
  j["source"] = graph.source;
  j["sink"] = graph.sink;
  return j.dump();
}

LayeredDAG layered_dag_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  LayeredDAG g;
  g.num_nodes = j.at("num_nodes").get<int>();
  for (const auto& e : j.at("edges")) g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  g.source = j.at("source").get<int>();
  g.sink = j.at("sink").get<int>();
  return g;
}

}  // namespace lacg
