#include "eegl/graph.h"

#include <algorithm>
#include <deque>
#include <string>

#include "eegl/error.h"

namespace eegl {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kNodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kPartitionSizeMismatch: return "PartitionSizeMismatch";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kDisconnectedPattern: return "DisconnectedPattern";
    case ErrorCode::kEmptyAnchorSet: return "EmptyAnchorSet";
    case ErrorCode::kEmptyDatabase: return "EmptyDatabase";
    case ErrorCode::kMissingRoot: return "MissingRoot";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kMaskShapeMismatch: return "MaskShapeMismatch";
    case ErrorCode::kNoEdgesInScope: return "NoEdgesInScope";
    case ErrorCode::kTooManyPatterns: return "TooManyPatterns";
    case ErrorCode::kMissingLabels: return "MissingLabels";
    case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::kBadParams: return "BadParams";
    case ErrorCode::kNotEnoughBaseNodes: return "NotEnoughBaseNodes";
    case ErrorCode::kCertificateFailure: return "CertificateFailure";
    case ErrorCode::kNotCubic: return "NotCubic";
    case ErrorCode::kLabelCountMismatch: return "LabelCountMismatch";
    case ErrorCode::kBadK: return "BadK";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kSpecParseError: return "SpecParseError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Graph build_graph(int n, std::span<const Edge> edges, BuildOptions options) {
  if (n < 0) throw Error(ErrorCode::kNodeOutOfRange, "negative node count");
  std::vector<Edge> norm;
  norm.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw Error(ErrorCode::kNodeOutOfRange,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") with n=" + std::to_string(n));
    }
    if (e.u == e.v) throw Error(ErrorCode::kSelfLoop, "node " + std::to_string(e.u));
    norm.push_back(make_edge(e.u, e.v));
  }
  std::sort(norm.begin(), norm.end());
  auto dup = std::adjacent_find(norm.begin(), norm.end());
  if (dup != norm.end()) {
    if (options.duplicates == DuplicatePolicy::kError) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "(" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }
    norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
  }

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(norm);
  std::vector<int> deg(n, 0);
  for (const Edge& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.adj_.assign(g.offsets_[n], 0);
  std::vector<int> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adj_[fill[e.u]++] = e.v;
    g.adj_[fill[e.v]++] = e.u;
  }
  for (int v = 0; v < n; ++v) {
    std::sort(g.adj_.begin() + g.offsets_[v], g.adj_.begin() + g.offsets_[v + 1]);
  }
  g.edge_set_.reserve(g.edges_.size() * 2);
  for (const Edge& e : g.edges_) g.edge_set_.insert(Graph::key(e.u, e.v));
  return g;
}

Graph build_graph(int n, std::initializer_list<std::pair<int, int>> edges,
                  BuildOptions options) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (auto [a, b] : edges) list.push_back(Edge{a, b});
  return build_graph(n, list, options);
}

int Graph::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) return false;
  if (a > b) std::swap(a, b);
  return edge_set_.contains(key(a, b));
}

Graph Graph::with_attrs(std::vector<int> attrs) const {
  if (!attrs.empty() && static_cast<int>(attrs.size()) != n_) {
    throw Error(ErrorCode::kDimensionMismatch, "attribute vector length " +
                                                   std::to_string(attrs.size()) +
                                                   " != n=" + std::to_string(n_));
  }
  Graph copy = *this;
  copy.attrs_ = std::move(attrs);
  return copy;
}

RootedGraph::RootedGraph(Graph graph, NodeId root) : graph_(std::move(graph)), root_(root) {
  if (root_ < 0 || root_ >= graph_.num_nodes()) {
    throw Error(ErrorCode::kNodeOutOfRange, "root " + std::to_string(root_));
  }
}

RootedPattern::RootedPattern(Graph graph, NodeId root) : graph_(std::move(graph)), root_(root) {
  if (root_ < 0 || root_ >= graph_.num_nodes()) {
    throw Error(ErrorCode::kNodeOutOfRange, "pattern root " + std::to_string(root_));
  }
  if (!is_connected(graph_)) throw Error(ErrorCode::kDisconnectedPattern, "pattern graph");
}

LineGraph line_graph(const Graph& g) {
  if (g.num_edges() == 0) throw Error(ErrorCode::kEmptyGraph, "line graph of edgeless graph");
  LineGraph out;
  out.edge_of = g.edges();
  const int m = g.num_edges();
  // Edges incident to each node, by L-node index.
  std::vector<std::vector<int>> incident(g.num_nodes());
  for (int i = 0; i < m; ++i) {
    incident[out.edge_of[i].u].push_back(i);
    incident[out.edge_of[i].v].push_back(i);
  }
  std::vector<Edge> l_edges;
  for (const auto& inc : incident) {
    for (size_t a = 0; a < inc.size(); ++a) {
      for (size_t b = a + 1; b < inc.size(); ++b) l_edges.push_back(make_edge(inc[a], inc[b]));
    }
  }
  // Two distinct simple edges share at most one endpoint, so no duplicates arise.
  out.graph = build_graph(m, l_edges);
  return out;
}

Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<int> local(g.num_nodes(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    NodeId v = nodes[i];
    if (v < 0 || v >= g.num_nodes()) {
      throw Error(ErrorCode::kNodeOutOfRange, "node " + std::to_string(v));
    }
    local[v] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : g.neighbors(nodes[i])) {
      int j = local[w];
      if (j > static_cast<int>(i)) edges.push_back(Edge{static_cast<int>(i), j});
    }
  }
  Subgraph out;
  out.graph = build_graph(static_cast<int>(nodes.size()), edges);
  if (g.has_attrs()) {
    std::vector<int> attrs;
    attrs.reserve(nodes.size());
    for (NodeId v : nodes) attrs.push_back(g.attr(v));
    out.graph = out.graph.with_attrs(std::move(attrs));
  }
  out.to_host.assign(nodes.begin(), nodes.end());
  return out;
}

std::vector<int> bfs_distances(const Graph& g, std::span<const NodeId> sources) {
  std::vector<int> dist(g.num_nodes(), -1);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (s < 0 || s >= g.num_nodes()) {
      throw Error(ErrorCode::kNodeOutOfRange, "source " + std::to_string(s));
    }
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

KHopSubgraph k_hop_subgraph(const Graph& g, NodeId v, int k) {
  if (v < 0 || v >= g.num_nodes()) {
    throw Error(ErrorCode::kNodeOutOfRange, "node " + std::to_string(v));
  }
  if (k < 0) throw Error(ErrorCode::kBadParams, "negative hop count");
  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<NodeId> order{v};
  dist[v] = 0;
  for (size_t head = 0; head < order.size(); ++head) {
    NodeId x = order[head];
    if (dist[x] == k) continue;
    for (NodeId w : g.neighbors(x)) {
      if (dist[w] < 0) {
        dist[w] = dist[x] + 1;
        order.push_back(w);
      }
    }
  }
  Subgraph sub = induced_subgraph(g, order);
  return KHopSubgraph{RootedGraph(std::move(sub.graph), 0), std::move(sub.to_host)};
}

bool is_connected(const Graph& g) {
  if (g.num_nodes() <= 1) return true;
  NodeId start = 0;
  auto dist = bfs_distances(g, std::span<const NodeId>(&start, 1));
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::vector<NodeId> component_of(const Graph& g, NodeId v) {
  auto dist = bfs_distances(g, std::span<const NodeId>(&v, 1));
  std::vector<NodeId> nodes;
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (dist[i] >= 0) nodes.push_back(i);
  }
  return nodes;
}

}  // namespace eegl
