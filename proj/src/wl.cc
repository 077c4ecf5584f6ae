#include "eegl/wl.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "eegl/error.h"
#include "refine.h"

namespace eegl {

std::vector<std::vector<NodeId>> NodePartition::blocks() const {
  std::vector<std::vector<NodeId>> out(num_classes);
  for (size_t v = 0; v < class_of.size(); ++v) out[class_of[v]].push_back(static_cast<NodeId>(v));
  return out;
}

NodePartition make_partition(std::span<const int> keys) {
  std::map<int, int> id;
  NodePartition p;
  p.class_of.reserve(keys.size());
  for (int k : keys) {
    auto [it, inserted] = id.emplace(k, static_cast<int>(id.size()));
    p.class_of.push_back(it->second);
  }
  p.num_classes = static_cast<int>(id.size());
  return p;
}

bool same_blocks(const NodePartition& a, const NodePartition& b) {
  if (a.class_of.size() != b.class_of.size()) return false;
  return make_partition(a.class_of) == make_partition(b.class_of);
}

bool refines(const NodePartition& fine, const NodePartition& coarse) {
  if (fine.class_of.size() != coarse.class_of.size()) return false;
  std::vector<int> image(fine.num_classes, -1);
  for (size_t v = 0; v < fine.class_of.size(); ++v) {
    int& slot = image[fine.class_of[v]];
    if (slot < 0) {
      slot = coarse.class_of[v];
    } else if (slot != coarse.class_of[v]) {
      return false;
    }
  }
  return true;
}

NodePartition wl_refine(const Graph& g, const std::optional<NodePartition>& initial) {
  const int n = g.num_nodes();
  std::vector<int> colors(n, 0);
  if (initial) {
    if (static_cast<int>(initial->class_of.size()) != n) {
      throw Error(ErrorCode::kPartitionSizeMismatch,
                  "initial partition has " + std::to_string(initial->class_of.size()) +
                      " entries, graph has " + std::to_string(n));
    }
    colors = detail::rank_keys(initial->class_of);
  }
  colors = detail::refine_equitable(g, std::move(colors));
  return make_partition(colors);
}

namespace {

bool is_automorphism(const Graph& g, const std::vector<NodeId>& perm) {
  for (const Edge& e : g.edges()) {
    if (!g.has_edge(perm[e.u], perm[e.v])) return false;
  }
  return true;
}

// Depth-first search over color-compatible individualizations.
bool extend(const Graph& g, std::vector<int> left, std::vector<int> right,
            std::vector<NodeId>& perm) {
  if (!detail::refine_pair(g, left, right)) return false;
  const int n = g.num_nodes();
  const int k = detail::count_colors(left);
  if (k == n) {
    std::vector<NodeId> node_of_color(n);
    for (int v = 0; v < n; ++v) node_of_color[right[v]] = v;
    for (int v = 0; v < n; ++v) perm[v] = node_of_color[left[v]];
    return is_automorphism(g, perm);
  }
  std::vector<int> size(k, 0);
  for (int c : left) ++size[c];
  int target = -1;
  for (int c = 0; c < k; ++c) {
    if (size[c] > 1 && (target < 0 || size[c] < size[target])) target = c;
  }
  NodeId x = -1;
  for (int v = 0; v < n && x < 0; ++v) {
    if (left[v] == target) x = v;
  }
  auto left_x = detail::individualize(left, x);
  for (int y = 0; y < n; ++y) {
    if (right[y] != target) continue;
    if (extend(g, left_x, detail::individualize(right, y), perm)) return true;
  }
  return false;
}

struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

}  // namespace

std::optional<std::vector<NodeId>> find_automorphism(const Graph& g, NodeId from, NodeId to) {
  const int n = g.num_nodes();
  if (from < 0 || from >= n || to < 0 || to >= n) {
    throw Error(ErrorCode::kNodeOutOfRange, "automorphism endpoints");
  }
  std::vector<int> base = detail::refine_equitable(g, std::vector<int>(n, 0));
  if (base[from] != base[to]) return std::nullopt;
  std::vector<NodeId> perm(n);
  if (extend(g, detail::individualize(base, from), detail::individualize(base, to), perm)) {
    return perm;
  }
  return std::nullopt;
}

NodePartition orbits(const Graph& g, OrbitOptions options) {
  const int n = g.num_nodes();
  if (n > options.max_nodes) {
    throw Error(ErrorCode::kBudgetExceeded, "orbit computation limited to " +
                                                std::to_string(options.max_nodes) + " nodes");
  }
  std::vector<int> base = detail::refine_equitable(g, std::vector<int>(n, 0));
  UnionFind uf(n);
  // Orbit representatives per WL color.
  std::vector<std::vector<NodeId>> reps(detail::count_colors(base));
  std::vector<NodeId> perm(n);
  for (int v = 0; v < n; ++v) {
    auto& cell_reps = reps[base[v]];
    bool placed = std::any_of(cell_reps.begin(), cell_reps.end(),
                              [&](NodeId r) { return uf.find(r) == uf.find(v); });
    for (NodeId r : cell_reps) {
      if (placed) break;
      if (extend(g, detail::individualize(base, r), detail::individualize(base, v), perm)) {
        for (int x = 0; x < n; ++x) uf.unite(x, perm[x]);
        placed = true;
        break;
      }
    }
    if (!placed) cell_reps.push_back(v);
  }
  std::vector<int> root(n);
  for (int v = 0; v < n; ++v) root[v] = uf.find(v);
  return make_partition(root);
}

NodePartition distance_classes(const Graph& g, std::span<const NodeId> anchors) {
  if (anchors.empty()) throw Error(ErrorCode::kEmptyAnchorSet, "distance classes");
  std::vector<int> dist = bfs_distances(g, anchors);
  return make_partition(dist);
}

nlohmann::json partition_to_json(const NodePartition& p) {
  return nlohmann::json{{"num_classes", p.num_classes}, {"class_of", p.class_of}};
}

}  // namespace eegl
