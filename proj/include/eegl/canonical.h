#ifndef EEGL_CANONICAL_H_
#define EEGL_CANONICAL_H_

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "eegl/graph.h"

namespace eegl {

// Byte string identifying a (rooted, optionally attributed) graph up to
// root- and attribute-preserving isomorphism.
struct CanonicalCode {
  std::string bytes;

  auto operator<=>(const CanonicalCode&) const = default;
  std::string hex() const;
};

struct CanonicalForm {
  CanonicalCode code;
  std::vector<NodeId> label_of;  // node -> canonical position
};

struct CanonicalOptions {
  bool respect_attrs = true;
  long max_leaves = 5'000'000;  // kBudgetExceeded beyond this
};

CanonicalForm canonical_form(const Graph& g, std::optional<NodeId> root,
                             CanonicalOptions options = {});
CanonicalCode canonical_code(const Graph& g, std::optional<NodeId> root,
                             CanonicalOptions options = {});
CanonicalCode canonical_code(const RootedPattern& p, CanonicalOptions options = {});

// Relabels g so node v becomes label_of[v]; the root (if any) follows.
Graph permute_graph(const Graph& g, const std::vector<NodeId>& label_of);

}  // namespace eegl

#endif  // EEGL_CANONICAL_H_
