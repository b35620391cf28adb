#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lacg {

/// Raised when a graph cannot serve as a flow polytope (cycle, unreachable
/// sink, bad endpoints).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LayeredDAG {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  int source = 0;
  int sink = 0;
};

/// Source -> `layers` layers of `width` nodes, consecutive layers fully
/// connected, last layer -> sink. 15 x 15 gives 227 nodes and 3180 edges.
LayeredDAG make_layered_dag(int layers, int width);

/// Adjacency and a topological order, validated once.
struct DagIndex {
  std::vector<std::vector<int>> out_edges;  // node -> edge ids, ascending
  std::vector<int> topo_order;

  static DagIndex build(const LayeredDAG& graph);
};

/// Edge ids (ascending) of a minimum-cost source-sink path, computed by
/// relaxation in topological order. Ties keep the first relaxation.
std::vector<int> shortest_path_edges(const LayeredDAG& graph, const DagIndex& index,
                                     const Eigen::VectorXd& cost);

/// Every source-sink path as a sorted edge list; stops after `limit` + 1.
std::vector<std::vector<int>> enumerate_paths(const LayeredDAG& graph, const DagIndex& index,
                                              std::size_t limit);

/// {"num_nodes", "edges": [[u, v], ...], "source", "sink"}
std::string to_json(const LayeredDAG& graph);
LayeredDAG layered_dag_from_json(std::string_view text);

}  // namespace lacg
