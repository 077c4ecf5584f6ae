#ifndef EEGL_SRC_REFINE_H_
#define EEGL_SRC_REFINE_H_

#include <algorithm>
#include <vector>

#include "eegl/graph.h"

namespace eegl::detail {

// Number of distinct colors in a coloring whose ids are 0..k-1.
inline int count_colors(const std::vector<int>& colors) {
  int k = 0;
  for (int c : colors) k = std::max(k, c + 1);
  return k;
}

// Signature of v: own color followed by the sorted neighbor colors.
inline std::vector<int> signature(const Graph& g, const std::vector<int>& colors, NodeId v) {
  std::vector<int> sig;
  sig.reserve(g.degree(v) + 1);
  sig.push_back(colors[v]);
  for (NodeId w : g.neighbors(v)) sig.push_back(colors[w]);
  std::sort(sig.begin() + 1, sig.end());
  return sig;
}

// One refinement step: new color = rank of the node's signature among all
// distinct signatures. Rank order is isomorphism-invariant. Writes the sorted
// distinct signature list with multiplicities to `trace` when non-null.
inline std::vector<int> refine_step(const Graph& g, const std::vector<int>& colors,
                                    std::vector<std::pair<std::vector<int>, int>>* trace) {
  const int n = g.num_nodes();
  std::vector<std::vector<int>> sigs(n);
  for (int v = 0; v < n; ++v) sigs[v] = signature(g, colors, v);
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return sigs[a] < sigs[b]; });
  std::vector<int> next(n, 0);
  int rank = -1;
  if (trace) trace->clear();
  for (int i = 0; i < n; ++i) {
    if (i == 0 || sigs[order[i]] != sigs[order[i - 1]]) {
      ++rank;
      if (trace) trace->emplace_back(sigs[order[i]], 0);
    }
    next[order[i]] = rank;
    if (trace) ++trace->back().second;
  }
  return next;
}

// Iterates refine_step to the coarsest equitable refinement of `colors`.
inline std::vector<int> refine_equitable(const Graph& g, std::vector<int> colors) {
  int k = count_colors(colors);
  while (true) {
    std::vector<int> next = refine_step(g, colors, nullptr);
    int k2 = count_colors(next);
    colors = std::move(next);
    if (k2 == k) return colors;
    k = k2;
  }
}

// Refines two colorings in lockstep; returns false as soon as their
// signature multisets diverge (no color-preserving isomorphism can exist).
inline bool refine_pair(const Graph& g, std::vector<int>& left, std::vector<int>& right) {
  std::vector<std::pair<std::vector<int>, int>> tl, tr;
  int k = count_colors(left);
  while (true) {
    std::vector<int> nl = refine_step(g, left, &tl);
    std::vector<int> nr = refine_step(g, right, &tr);
    if (tl != tr) return false;
    int k2 = count_colors(nl);
    left = std::move(nl);
    right = std::move(nr);
    if (k2 == k) return true;
    k = k2;
  }
}

// Gives v a fresh color placed right before the rest of its cell; all ids
// above shift by one. Isomorphism-invariant given the cell.
inline std::vector<int> individualize(const std::vector<int>& colors, NodeId v) {
  const int c = colors[v];
  std::vector<int> out(colors.size());
  for (size_t i = 0; i < colors.size(); ++i) {
    if (static_cast<NodeId>(i) == v) {
      out[i] = c;
    } else {
      out[i] = colors[i] >= c ? colors[i] + 1 : colors[i];
    }
  }
  return out;
}

// Ranks arbitrary sortable keys into dense color ids 0..k-1.
template <typename Key>
std::vector<int> rank_keys(const std::vector<Key>& keys) {
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> out(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) -
                              sorted.begin());
  }
  return out;
}

}  // namespace eegl::detail

#endif  // EEGL_SRC_REFINE_H_
