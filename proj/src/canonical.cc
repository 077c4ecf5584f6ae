#include "eegl/canonical.h"

#include <algorithm>
#include <tuple>

#include "eegl/error.h"
#include "refine.h"

namespace eegl {
namespace {

void put16(std::string& out, int value) {
  out.push_back(static_cast<char>((value >> 8) & 0xff));
  out.push_back(static_cast<char>(value & 0xff));
}

class CanonicalSearch {
 public:
  CanonicalSearch(const Graph& g, std::optional<NodeId> root, CanonicalOptions options)
      : g_(g), root_(root), options_(options) {}

  CanonicalForm run() {
    const int n = g_.num_nodes();
    std::vector<std::tuple<int, int, int>> keys(n);
    for (int v = 0; v < n; ++v) {
      int is_root = (root_ && *root_ == v) ? 0 : 1;
      int attr = options_.respect_attrs ? g_.attr(v) : 0;
      keys[v] = {is_root, attr, g_.degree(v)};
    }
    search(detail::rank_keys(keys));
    return CanonicalForm{CanonicalCode{best_}, best_labels_};
  }

 private:
  std::string leaf_code(const std::vector<int>& label_of) const {
    const int n = g_.num_nodes();
    std::string code;
    code.reserve(4 + 3 * n + 4 * g_.num_edges());
    put16(code, n);
    put16(code, g_.num_edges());
    std::vector<NodeId> node_at(n);
    for (int v = 0; v < n; ++v) node_at[label_of[v]] = v;
    for (int i = 0; i < n; ++i) {
      NodeId v = node_at[i];
      code.push_back(root_ && *root_ == v ? 1 : 0);
      put16(code, options_.respect_attrs ? g_.attr(v) : 0);
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g_.num_edges());
    for (const Edge& e : g_.edges()) {
      int a = label_of[e.u], b = label_of[e.v];
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) {
      put16(code, a);
      put16(code, b);
    }
    return code;
  }

  bool twins(NodeId a, NodeId b) const {
    if (g_.degree(a) != g_.degree(b)) return false;
    if (options_.respect_attrs && g_.attr(a) != g_.attr(b)) return false;
    if (root_ && (*root_ == a || *root_ == b)) return false;
    auto na = g_.neighbors(a);
    auto nb = g_.neighbors(b);
    size_t i = 0, j = 0;
    while (true) {
      while (i < na.size() && na[i] == b) ++i;
      while (j < nb.size() && nb[j] == a) ++j;
      if (i == na.size() || j == nb.size()) return i == na.size() && j == nb.size();
      if (na[i] != nb[j]) return false;
      ++i;
      ++j;
    }
  }

  void search(std::vector<int> colors) {
    colors = detail::refine_equitable(g_, std::move(colors));
    const int n = g_.num_nodes();
    const int k = detail::count_colors(colors);
    if (k == n) {
      if (++leaves_ > options_.max_leaves) {
        throw Error(ErrorCode::kBudgetExceeded, "canonical labeling leaf budget");
      }
      std::string code = leaf_code(colors);
      if (!have_best_ || code < best_) {
        best_ = std::move(code);
        best_labels_ = colors;
        have_best_ = true;
      }
      return;
    }
    // Target cell: smallest non-singleton, lowest color id on ties.
    std::vector<int> size(k, 0);
    for (int c : colors) ++size[c];
    int target = -1;
    for (int c = 0; c < k; ++c) {
      if (size[c] > 1 && (target < 0 || size[c] < size[target])) target = c;
    }
    std::vector<NodeId> tried;
    for (int v = 0; v < n; ++v) {
      if (colors[v] != target) continue;
      bool redundant = std::any_of(tried.begin(), tried.end(),
                                   [&](NodeId u) { return twins(u, v); });
      if (redundant) continue;
      tried.push_back(v);
      search(detail::individualize(colors, v));
    }
  }

  const Graph& g_;
  std::optional<NodeId> root_;
  CanonicalOptions options_;
  std::string best_;
  std::vector<NodeId> best_labels_;
  bool have_best_ = false;
  long leaves_ = 0;
};

}  // namespace

std::string CanonicalCode::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

CanonicalForm canonical_form(const Graph& g, std::optional<NodeId> root,
                             CanonicalOptions options) {
  if (root && (*root < 0 || *root >= g.num_nodes())) {
    throw Error(ErrorCode::kNodeOutOfRange, "canonical root");
  }
  if (g.num_nodes() == 0) {
    std::string code;
    put16(code, 0);
    put16(code, 0);
    return CanonicalForm{CanonicalCode{code}, {}};
  }
  return CanonicalSearch(g, root, options).run();
}

CanonicalCode canonical_code(const Graph& g, std::optional<NodeId> root,
                             CanonicalOptions options) {
  return canonical_form(g, root, options).code;
}

CanonicalCode canonical_code(const RootedPattern& p, CanonicalOptions options) {
  return canonical_code(p.graph(), p.root(), options);
}

Graph permute_graph(const Graph& g, const std::vector<NodeId>& label_of) {
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back(make_edge(label_of[e.u], label_of[e.v]));
  Graph out = build_graph(g.num_nodes(), edges);
  if (g.has_attrs()) {
    std::vector<int> attrs(g.num_nodes());
    for (int v = 0; v < g.num_nodes(); ++v) attrs[label_of[v]] = g.attr(v);
    out = out.with_attrs(std::move(attrs));
  }
  return out;
}

}  // namespace eegl
