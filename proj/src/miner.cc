#include "eegl/miner.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "eegl/error.h"
#include "eegl/parallel.h"
#include "eegl/subiso.h"

namespace eegl {
namespace {

struct Node {
  RootedPattern pattern;
  CanonicalCode code;
  std::vector<int> tids;
};

struct Candidate {
  RootedPattern pattern;
  CanonicalCode code;
  int parent;                // frontier entry whose tids are scanned
  std::vector<int> parents;  // every frontier entry that generates it
};

// Relabels a pattern into its canonical numbering so the stored form only
// depends on its isomorphism class.
std::pair<RootedPattern, CanonicalCode> canonicalize(const Graph& g, NodeId root) {
  CanonicalForm form = canonical_form(g, root, {.respect_attrs = false});
  return {RootedPattern(permute_graph(g, form.label_of), form.label_of[root]),
          std::move(form.code)};
}

Graph with_edge(const Graph& g, int n, Edge extra) {
  std::vector<Edge> edges = g.edges();
  edges.push_back(extra);
  return build_graph(n, edges);
}

bool pattern_order(const MinedPattern& a, const MinedPattern& b) {
  return std::forward_as_tuple(a.pattern.num_nodes(), a.pattern.num_edges(), a.code) <
         std::forward_as_tuple(b.pattern.num_nodes(), b.pattern.num_edges(), b.code);
}

}  // namespace

int min_support(double tau, int m) {
  return std::max(0, static_cast<int>(std::ceil(tau * m - 1e-9)));
}

FrequentPatternSet mine_frequent(const ExplanationDB& db, double tau, MinerOptions options) {
  if (db.m() == 0) throw Error(ErrorCode::kEmptyDatabase, "explanation database is empty");
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::kBadParams, "tau must lie in (0, 1]");
  if (options.max_pattern_nodes < 1)
    throw Error(ErrorCode::kBadParams, "max_pattern_nodes must be >= 1");

  const int threshold = std::max(1, min_support(tau, db.m()));
  int max_nodes = 0, max_edges = 0;
  std::vector<int> root_tids;
  for (int t = 0; t < db.m(); ++t) {
    if (!db.graphs[t]) continue;
    root_tids.push_back(t);
    max_nodes = std::max(max_nodes, db.graphs[t]->graph().num_nodes());
    max_edges = std::max(max_edges, db.graphs[t]->graph().num_edges());
  }
  max_nodes = std::min(max_nodes, options.max_pattern_nodes);

  FrequentPatternSet out;
  out.tau = tau;
  out.m = db.m();
  out.downward_closed = true;
  if (static_cast<int>(root_tids.size()) < threshold) return out;

  // Frequent patterns get their output index, infrequent ones -1.
  std::map<CanonicalCode, int> seen;
  std::vector<Node> frontier;
  {
    auto [p, code] = canonicalize(build_graph(1, std::vector<Edge>{}), 0);
    seen.emplace(code, 0);
    out.patterns.push_back({p, code, static_cast<int>(root_tids.size())});
    out.child_frequent.push_back(0);
    frontier.push_back({p, code, root_tids});
  }
  std::vector<int> frontier_index{0};

  while (!frontier.empty()) {
    std::vector<Candidate> candidates;
    std::map<CanonicalCode, int> level_codes;
    for (int f = 0; f < static_cast<int>(frontier.size()); ++f) {
      const Graph& g = frontier[f].pattern.graph();
      const int n = g.num_nodes();
      if (g.num_edges() >= max_edges) continue;
      std::vector<std::pair<Graph, int>> grown;
      if (n < max_nodes)
        for (NodeId i = 0; i < n; ++i) grown.emplace_back(with_edge(g, n + 1, Edge{i, n}), n + 1);
      for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
          if (!g.has_edge(i, j)) grown.emplace_back(with_edge(g, n, Edge{i, j}), n);
      for (auto& [h, hn] : grown) {
        auto [p, code] = canonicalize(h, frontier[f].pattern.root());
        if (auto it = seen.find(code); it != seen.end()) {
          if (it->second >= 0) out.child_frequent[frontier_index[f]] = 1;
          continue;
        }
        if (auto it = level_codes.find(code); it != level_codes.end()) {
          auto& ps = candidates[it->second].parents;
          if (ps.back() != f) ps.push_back(f);
          continue;
        }
        level_codes.emplace(code, static_cast<int>(candidates.size()));
        candidates.push_back({std::move(p), std::move(code), f, {f}});
      }
    }

    // The parent's supporting transactions are a superset of the child's, so
    // one parent's list gives the exact support.
    std::vector<std::vector<int>> tids(candidates.size());
    parallel_for(static_cast<int>(candidates.size()), [&](int c) {
      const RootedPattern& p = candidates[c].pattern;
      Matcher matcher(p.graph(), p.root());
      for (int t : frontier[candidates[c].parent].tids) {
        const RootedGraph& rg = *db.graphs[t];
        if (matcher.matches_at(rg.graph(), rg.root())) tids[c].push_back(t);
      }
    });

    std::vector<Node> next;
    std::vector<int> next_index;
    for (size_t c = 0; c < candidates.size(); ++c) {
      const int support = static_cast<int>(tids[c].size());
      if (support < threshold) {
        seen.emplace(candidates[c].code, -1);
        continue;
      }
      const int index = static_cast<int>(out.patterns.size());
      if (index >= options.max_patterns)
        throw Error(ErrorCode::kBudgetExceeded, "frequent pattern count exceeds max_patterns");
      seen.emplace(candidates[c].code, index);
      for (int f : candidates[c].parents) out.child_frequent[frontier_index[f]] = 1;
      out.patterns.push_back({candidates[c].pattern, candidates[c].code, support});
      out.child_frequent.push_back(0);
      next.push_back({candidates[c].pattern, candidates[c].code, std::move(tids[c])});
      next_index.push_back(index);
    }
    frontier = std::move(next);
    frontier_index = std::move(next_index);
  }

  std::vector<int> order(out.patterns.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return pattern_order(out.patterns[a], out.patterns[b]);
  });
  FrequentPatternSet sorted = out;
  for (size_t i = 0; i < order.size(); ++i) {
    sorted.patterns[i] = out.patterns[order[i]];
    sorted.child_frequent[i] = out.child_frequent[order[i]];
  }
  return sorted;
}

FrequentPatternSet maximal_filter(const FrequentPatternSet& fs) {
  FrequentPatternSet out;
  out.tau = fs.tau;
  out.m = fs.m;
  out.maximal_only = true;
  const int count = static_cast<int>(fs.patterns.size());
  std::vector<char> keep(count, 1);
  if (fs.downward_closed && static_cast<int>(fs.child_frequent.size()) == count) {
    // In a downward-closed set, any embedding into a larger member passes
    // through a one-edge extension that is itself a member.
    for (int i = 0; i < count; ++i) keep[i] = !fs.child_frequent[i];
  } else {
    parallel_for(count, [&](int i) {
      const RootedPattern& p = fs.patterns[i].pattern;
      Matcher matcher(p.graph(), p.root());
      for (int j = 0; j < count && keep[i]; ++j) {
        const RootedPattern& q = fs.patterns[j].pattern;
        // Same edge count with a different code cannot embed, and a
        // connected pattern with more nodes needs more edges.
        if (q.num_edges() <= p.num_edges() || q.num_nodes() < p.num_nodes()) continue;
        if (matcher.matches_at(q.graph(), q.root())) keep[i] = 0;
      }
    });
  }
  for (int i = 0; i < count; ++i)
    if (keep[i]) out.patterns.push_back(fs.patterns[i]);
  std::sort(out.patterns.begin(), out.patterns.end(), pattern_order);
  return out;
}

FrequentPatternSet mine_maximal(const ExplanationDB& db, double tau, MinerOptions options) {
  return maximal_filter(mine_frequent(db, tau, options));
}

Graph encode_root_as_attr(const RootedGraph& g) {
  std::vector<int> attrs(g.graph().num_nodes(), 0);
  attrs[g.root()] = 1;
  return g.graph().with_attrs(std::move(attrs));
}

RootedGraph decode_root_attr(const Graph& g) {
  std::optional<NodeId> root;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.attr(v) != 1) continue;
    if (root) throw Error(ErrorCode::kMissingRoot, "more than one node carries the root label");
    root = v;
  }
  if (!root) throw Error(ErrorCode::kMissingRoot, "no node carries the root label");
  return RootedGraph(g.with_attrs({}), *root);
}

}  // namespace eegl
