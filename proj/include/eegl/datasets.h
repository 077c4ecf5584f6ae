#ifndef EEGL_DATASETS_H_
#define EEGL_DATASETS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "eegl/gcn.h"
#include "eegl/graph.h"

namespace eegl {

struct LabeledDataset {
  std::string name;
  Graph graph;
  std::vector<int> labels;
  int num_classes = 0;
  std::vector<int> motif_membership;  // copy id per node, -1 outside motifs; may be empty
  nlohmann::json provenance;
};

// Checks label range and lengths; throws kLabelOutOfRange / kDimensionMismatch.
void validate_dataset(const LabeledDataset& ds);

// Preferential attachment seeded with a star on m_ba + 1 nodes; every new
// node attaches to m_ba distinct nodes chosen proportionally to degree.
// Edge count is m_ba * (n - m_ba).
Graph gen_ba(int n, int m_ba, std::uint64_t seed);

struct MotifSpec {
  std::string name;
  Graph graph;
  std::vector<int> labels;
  NodeId attach = 0;  // motif node bridged to the base graph
};

struct MotifFamily {
  std::string name;
  std::vector<MotifSpec> motifs;
  int base_attach_label = 0;  // label for base nodes receiving a copy (0 = unchanged)
};

MotifFamily motif_family_from_json(const nlohmann::json& j);
nlohmann::json motif_family_to_json(const MotifFamily& f);
// Loads data/motifs/<name>.json from the given directory.
MotifFamily load_motif_family(const std::filesystem::path& data_dir, const std::string& name);

// Copies are drawn uniformly from the family and each is bridged by one edge
// from its attach node to a distinct random base node. Then noise_edges
// uniformly random new edges are added anywhere in the graph.
LabeledDataset plant_motifs(const Graph& base, const MotifFamily& family, int copies,
                            int noise_edges, std::uint64_t seed);

// ceil(0.01 * num_edges)
int default_noise_edges(int num_edges);

struct BaMotifParams {
  int base_nodes = 300;
  int copies = 80;
  int m_ba = 2;
  int noise_edges = -1;  // -1: default_noise_edges of the clean graph
  std::uint64_t seed = 1;
};

LabeledDataset gen_ba_motif(const MotifFamily& family, const BaMotifParams& params);

// The four bottom-rooted G180 motifs (14 nodes above the bottom, node 0 is
// the bottom). Index i selects the L3 matching (sibling/cousin, bit 1) and
// the L4 attachment (parallel/cross, bit 0).
RootedGraph g180_motif(int index);

// C12 with motif (i mod 4) identified at its bottom with cycle node i;
// labels are automorphism orbits. Throws kCertificateFailure unless WL gives
// exactly the 7 distance classes from the cycle, there are 28 orbits, and
// the four motifs are pairwise rooted non-isomorphic.
LabeledDataset build_g180();

enum class FullereneMode { kPentagonEdge, kExplicitLabels };

// Node classification on line_graph(g): label 1 for edges on a 5-cycle, or
// the supplied per-edge labels (in g.edges() order).
LabeledDataset fullerene_task(const Graph& g, FullereneMode mode,
                              std::span<const int> explicit_labels = {});

// Per-edge flag: the edge lies on some 5-cycle of g.
std::vector<char> pentagon_edges(const Graph& g);

// Fullerene constructions (see fullerenes.cc); names: c24_d6d, c60_ih,
// c70_d5h, c80_d5d.
Graph build_fullerene(const std::string& name);
std::vector<std::string> fullerene_names();

// Rooted patterns absent from every motif of the family (checked with
// sub_iso), used for the adversarial baseline. At most `count` patterns.
std::vector<RootedPattern> adversarial_patterns(const MotifFamily& family, int count);

struct FoldPlan {
  int k = 0;
  std::vector<int> fold_of;
  std::uint64_t seed = 0;

  std::vector<LabeledNode> train(const LabeledDataset& ds, int fold) const;
  std::vector<LabeledNode> test(const LabeledDataset& ds, int fold) const;
};

// Stratified: each class is shuffled and dealt round-robin across folds,
// continuing the deal across classes so fold sizes differ by at most one.
FoldPlan make_folds(const LabeledDataset& ds, int k, std::uint64_t seed);

// Files: graph.json, labels.txt (one per line), provenance.json.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir);
LabeledDataset load_dataset(const std::filesystem::path& dir);

}  // namespace eegl

#endif  // EEGL_DATASETS_H_
