#ifndef EEGL_SUBISO_H_
#define EEGL_SUBISO_H_

#include <optional>
#include <span>
#include <vector>

#include "eegl/graph.h"

namespace eegl {

struct MatchOptions {
  bool respect_attrs = false;
  // Candidate assignments per call; exceeding it throws kBudgetExceeded.
  long max_expansions = 10'000'000;
};

// Monomorphism search for a fixed connected pattern, reusable across targets.
// Pattern nodes are visited in an order where every node after the first has
// an already-placed neighbor, highest connectivity first.
class Matcher {
 public:
  // `anchor` is the pattern node placed first (the root in rooted mode).
  Matcher(const Graph& pattern, NodeId anchor, MatchOptions options = {});

  // Embedding with anchor -> target_root.
  bool matches_at(const Graph& target, NodeId target_root) const;
  // Embedding anywhere in target.
  bool matches_anywhere(const Graph& target) const;

  // Image of every pattern node for the last successful match_at call.
  std::optional<std::vector<NodeId>> embedding_at(const Graph& target, NodeId target_root) const;

 private:
  struct Step {
    NodeId node;
    int parent_pos;                // position in order of the placed neighbor to branch from
    std::vector<int> back_pos;     // other earlier positions that must be adjacent
    int degree;
    int attr;
  };

  bool search(const Graph& target, std::vector<NodeId>& image, long& budget) const;

  const Graph* pattern_;
  MatchOptions options_;
  std::vector<Step> order_;
};

// True iff an injective edge-preserving map sends p's root to t's root.
bool rooted_sub_iso(const RootedPattern& p, const RootedGraph& t, MatchOptions options = {});
bool rooted_sub_iso(const RootedPattern& p, const Graph& t, NodeId t_root,
                    MatchOptions options = {});

// Unrooted monomorphism existence. p must be connected.
bool sub_iso(const Graph& p, const Graph& t, MatchOptions options = {});

struct Support {
  int support = 0;  // entries admitting a rooted embedding
  int m = 0;        // all entries, rootless ones included
};

// Transaction-based support; rootless entries (nullopt) never support a
// pattern but count toward m.
Support support_count(const RootedPattern& p, std::span<const std::optional<RootedGraph>> db,
                      MatchOptions options = {});

}  // namespace eegl

#endif  // EEGL_SUBISO_H_
