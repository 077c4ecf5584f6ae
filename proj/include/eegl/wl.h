#ifndef EEGL_WL_H_
#define EEGL_WL_H_

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "eegl/graph.h"

namespace eegl {

// Partition of V(G). Class ids are contiguous and numbered by first occurrence.
struct NodePartition {
  std::vector<int> class_of;
  int num_classes = 0;

  bool operator==(const NodePartition&) const = default;

  std::vector<std::vector<NodeId>> blocks() const;
};

// Renumbers arbitrary class keys by first occurrence.
NodePartition make_partition(std::span<const int> keys);

// True if both describe the same set of blocks.
bool same_blocks(const NodePartition& a, const NodePartition& b);

// True if every block of `fine` lies inside one block of `coarse`.
bool refines(const NodePartition& fine, const NodePartition& coarse);

// 1-WL color refinement to the coarsest stable refinement of `initial`
// (default: the all-one coloring).
NodePartition wl_refine(const Graph& g, const std::optional<NodePartition>& initial = std::nullopt);

struct OrbitOptions {
  int max_nodes = 500;
};

// Exact automorphism orbits via WL-pruned backtracking.
NodePartition orbits(const Graph& g, OrbitOptions options = {});

// Searches for an automorphism mapping `from` to `to`; returns the permutation.
std::optional<std::vector<NodeId>> find_automorphism(const Graph& g, NodeId from, NodeId to);

// Partition by BFS distance from the anchor set (unreachable nodes share a class).
NodePartition distance_classes(const Graph& g, std::span<const NodeId> anchors);

nlohmann::json partition_to_json(const NodePartition& p);

}  // namespace eegl

#endif  // EEGL_WL_H_
