#ifndef EEGL_GRAPH_H_
#define EEGL_GRAPH_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

namespace eegl {

using NodeId = int;

// Unordered edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

enum class DuplicatePolicy { kError, kIgnore };

struct BuildOptions {
  DuplicatePolicy duplicates = DuplicatePolicy::kError;
};

// Immutable undirected simple graph. Adjacency is kept both as sorted CSR
// neighbor lists (for the search routines) and as a hashed edge set (for
// constant-time membership).
class Graph {
 public:
  Graph() = default;

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool empty() const { return n_ == 0; }

  // Lexicographically sorted.
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  int degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  int max_degree() const;
  bool has_edge(NodeId a, NodeId b) const;

  bool has_attrs() const { return !attrs_.empty(); }
  const std::vector<int>& attrs() const { return attrs_; }
  int attr(NodeId v) const { return attrs_.empty() ? 0 : attrs_[v]; }

  // Copy with node attributes replaced (empty vector clears them).
  Graph with_attrs(std::vector<int> attrs) const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_ && attrs_ == other.attrs_;
  }

  friend Graph build_graph(int n, std::span<const Edge> edges, BuildOptions options);

 private:
  static std::uint64_t key(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<NodeId> adj_;
  std::unordered_set<std::uint64_t> edge_set_;
  std::vector<int> attrs_;
};

// Validates and normalizes an edge list. Throws kSelfLoop, kNodeOutOfRange,
// or kDuplicateEdge (unless options.duplicates == kIgnore).
Graph build_graph(int n, std::span<const Edge> edges, BuildOptions options = {});
Graph build_graph(int n, std::initializer_list<std::pair<int, int>> edges,
                  BuildOptions options = {});

class RootedGraph {
 public:
  RootedGraph(Graph graph, NodeId root);

  const Graph& graph() const { return graph_; }
  NodeId root() const { return root_; }

 private:
  Graph graph_;
  NodeId root_;
};

// Connected graph with a distinguished root.
class RootedPattern {
 public:
  RootedPattern(Graph graph, NodeId root);

  const Graph& graph() const { return graph_; }
  NodeId root() const { return root_; }
  int num_nodes() const { return graph_.num_nodes(); }
  int num_edges() const { return graph_.num_edges(); }

  RootedGraph as_rooted_graph() const { return RootedGraph(graph_, root_); }

 private:
  Graph graph_;
  NodeId root_;
};

struct LineGraph {
  Graph graph;
  // L-node i represents edge edge_of[i] of the source graph.
  std::vector<Edge> edge_of;
};

LineGraph line_graph(const Graph& g);

struct Subgraph {
  Graph graph;
  std::vector<NodeId> to_host;  // local id -> host id
};

// Node-induced subgraph on `nodes` (kept in the given order); host attrs carry over.
Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

struct KHopSubgraph {
  RootedGraph rooted;
  std::vector<NodeId> to_host;  // BFS order; to_host[0] == v
};

KHopSubgraph k_hop_subgraph(const Graph& g, NodeId v, int k);

// Multi-source BFS; unreachable nodes get -1.
std::vector<int> bfs_distances(const Graph& g, std::span<const NodeId> sources);

bool is_connected(const Graph& g);

// Nodes of the connected component containing v, ascending.
std::vector<NodeId> component_of(const Graph& g, NodeId v);

}  // namespace eegl

#endif  // EEGL_GRAPH_H_
