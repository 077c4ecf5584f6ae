#include "eegl/subiso.h"

#include <algorithm>

#include "eegl/error.h"

namespace eegl {

Matcher::Matcher(const Graph& pattern, NodeId anchor, MatchOptions options)
    : pattern_(&pattern), options_(options) {
  const int k = pattern.num_nodes();
  if (k == 0) return;
  if (anchor < 0 || anchor >= k) throw Error(ErrorCode::kNodeOutOfRange, "pattern anchor");
  if (!is_connected(pattern)) throw Error(ErrorCode::kDisconnectedPattern, "pattern graph");

  std::vector<int> pos(k, -1);
  std::vector<int> links(k, 0);  // placed neighbors per unplaced node
  auto place = [&](NodeId v, int parent_pos) {
    Step step{v, parent_pos, {}, pattern.degree(v), pattern.attr(v)};
    for (NodeId w : pattern.neighbors(v)) {
      if (pos[w] >= 0 && pos[w] != parent_pos) step.back_pos.push_back(pos[w]);
      ++links[w];
    }
    pos[v] = static_cast<int>(order_.size());
    order_.push_back(std::move(step));
  };
  place(anchor, -1);
  while (static_cast<int>(order_.size()) < k) {
    NodeId best = -1;
    for (NodeId v = 0; v < k; ++v) {
      if (pos[v] >= 0 || links[v] == 0) continue;
      if (best < 0 || links[v] > links[best] ||
          (links[v] == links[best] && pattern.degree(v) > pattern.degree(best))) {
        best = v;
      }
    }
    int parent = -1;
    for (NodeId w : pattern.neighbors(best)) {
      if (pos[w] >= 0 && (parent < 0 || pos[w] < parent)) parent = pos[w];
    }
    place(best, parent);
  }
}

bool Matcher::search(const Graph& target, std::vector<NodeId>& image, long& budget) const {
  const size_t depth = image.size();
  if (depth == order_.size()) return true;
  const Step& step = order_[depth];
  for (NodeId c : target.neighbors(image[step.parent_pos])) {
    if (--budget < 0) throw Error(ErrorCode::kBudgetExceeded, "subgraph isomorphism expansions");
    if (target.degree(c) < step.degree) continue;
    if (options_.respect_attrs && target.attr(c) != step.attr) continue;
    if (std::find(image.begin(), image.end(), c) != image.end()) continue;
    bool ok = true;
    for (int bp : step.back_pos) {
      if (!target.has_edge(image[bp], c)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    image.push_back(c);
    if (search(target, image, budget)) return true;
    image.pop_back();
  }
  return false;
}

std::optional<std::vector<NodeId>> Matcher::embedding_at(const Graph& target,
                                                         NodeId target_root) const {
  if (target_root < 0 || target_root >= target.num_nodes()) {
    throw Error(ErrorCode::kNodeOutOfRange, "target root");
  }
  if (order_.empty()) return std::vector<NodeId>{};
  if (static_cast<int>(order_.size()) > target.num_nodes()) return std::nullopt;
  const Step& first = order_[0];
  if (target.degree(target_root) < first.degree) return std::nullopt;
  if (options_.respect_attrs && target.attr(target_root) != first.attr) return std::nullopt;
  std::vector<NodeId> image;
  image.reserve(order_.size());
  image.push_back(target_root);
  long budget = options_.max_expansions;
  if (!search(target, image, budget)) return std::nullopt;
  std::vector<NodeId> by_node(order_.size());
  for (size_t i = 0; i < order_.size(); ++i) by_node[order_[i].node] = image[i];
  return by_node;
}

bool Matcher::matches_at(const Graph& target, NodeId target_root) const {
  return embedding_at(target, target_root).has_value();
}

bool Matcher::matches_anywhere(const Graph& target) const {
  if (order_.empty()) return true;
  if (static_cast<int>(order_.size()) > target.num_nodes()) return false;
  const Step& first = order_[0];
  long budget = options_.max_expansions;
  std::vector<NodeId> image;
  image.reserve(order_.size());
  for (NodeId r = 0; r < target.num_nodes(); ++r) {
    if (--budget < 0) throw Error(ErrorCode::kBudgetExceeded, "subgraph isomorphism expansions");
    if (target.degree(r) < first.degree) continue;
    if (options_.respect_attrs && target.attr(r) != first.attr) continue;
    image.assign(1, r);
    if (search(target, image, budget)) return true;
  }
  return false;
}

bool rooted_sub_iso(const RootedPattern& p, const RootedGraph& t, MatchOptions options) {
  return rooted_sub_iso(p, t.graph(), t.root(), options);
}

bool rooted_sub_iso(const RootedPattern& p, const Graph& t, NodeId t_root, MatchOptions options) {
  return Matcher(p.graph(), p.root(), options).matches_at(t, t_root);
}

bool sub_iso(const Graph& p, const Graph& t, MatchOptions options) {
  if (p.num_nodes() == 0) return true;
  NodeId anchor = 0;
  for (NodeId v = 1; v < p.num_nodes(); ++v) {
    if (p.degree(v) > p.degree(anchor)) anchor = v;
  }
  return Matcher(p, anchor, options).matches_anywhere(t);
}

Support support_count(const RootedPattern& p, std::span<const std::optional<RootedGraph>> db,
                      MatchOptions options) {
  Matcher matcher(p.graph(), p.root(), options);
  Support s;
  s.m = static_cast<int>(db.size());
  for (const auto& entry : db) {
    if (entry && matcher.matches_at(entry->graph(), entry->root())) ++s.support;
  }
  return s;
}

}  // namespace eegl
