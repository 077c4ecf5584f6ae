#ifndef EEGL_MINER_H_
#define EEGL_MINER_H_

#include <optional>
#include <vector>

#include "eegl/canonical.h"
#include "eegl/graph.h"

namespace eegl {

// Explanations of one predicted class. Entries are compact rooted graphs;
// nullopt marks an explainer failure that still counts toward m.
struct ExplanationDB {
  int class_label = 0;
  std::vector<std::optional<RootedGraph>> graphs;

  int m() const { return static_cast<int>(graphs.size()); }
};

struct MinedPattern {
  RootedPattern pattern;
  CanonicalCode code;
  int support = 0;
};

struct FrequentPatternSet {
  std::vector<MinedPattern> patterns;  // sorted by (nodes, edges, code)
  double tau = 1.0;
  int m = 0;
  bool maximal_only = false;
  // Set by mine_frequent: the set contains every frequent pattern within
  // the cap, and child_frequent[i] says whether pattern i has a frequent
  // one-edge extension in the set.
  bool downward_closed = false;
  std::vector<char> child_frequent;
};

struct MinerOptions {
  int max_pattern_nodes = 10;
  // Total frequent patterns before kBudgetExceeded.
  int max_patterns = 200'000;
};

// ceil(tau * m), guarded against float error.
int min_support(double tau, int m);

// All connected rooted patterns with support >= ceil(tau*m), grown one edge
// at a time from the single root node. Node attributes are ignored.
FrequentPatternSet mine_frequent(const ExplanationDB& db, double tau, MinerOptions options = {});

// Keeps the patterns that have no rooted embedding into another pattern.
FrequentPatternSet maximal_filter(const FrequentPatternSet& fs);

FrequentPatternSet mine_maximal(const ExplanationDB& db, double tau, MinerOptions options = {});

// Root becomes attribute 1, every other node 0.
Graph encode_root_as_attr(const RootedGraph& g);
// Inverse; kMissingRoot unless exactly one node carries attribute 1.
RootedGraph decode_root_attr(const Graph& g);

}  // namespace eegl

#endif  // EEGL_MINER_H_
