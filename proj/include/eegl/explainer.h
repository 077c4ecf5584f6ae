#ifndef EEGL_EXPLAINER_H_
#define EEGL_EXPLAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "eegl/gcn.h"
#include "eegl/graph.h"
#include "eegl/miner.h"

namespace eegl {

struct ExplainerHyper {
  int epochs = 200;
  double learning_rate = 0.01;
  double size_penalty = 0.005;    // weight on sum of sigmoid(mask)
  double entropy_penalty = 0.1;   // weight on sum of binary entropies
  int keep_top_edges = 8;
  double init_sd = 0.1;
  std::uint64_t seed = 1;
};

nlohmann::json explainer_hyper_to_json(const ExplainerHyper& h);
ExplainerHyper explainer_hyper_from_json(const nlohmann::json& j);

// Edges that can influence the model output at v: both endpoints within
// `depth` hops and at least one strictly closer. Local id 0 is v; local ids
// follow BFS order.
struct ExplainerScope {
  NodeId center = 0;
  int depth = 0;
  std::vector<NodeId> nodes;  // local -> host
  std::vector<int> dist;      // hop distance per local node
  std::vector<Edge> edges;    // local ids, same order as host_edges
  std::vector<Edge> host_edges;
};

ExplainerScope explainer_scope(const Graph& g, NodeId v, int depth);

struct Explanation {
  NodeId source = 0;
  int predicted_class = 0;
  // Compact rooted graph; nullopt when v has no edges in scope.
  std::optional<RootedGraph> subgraph;
  std::vector<NodeId> to_host;        // compact node -> host node
  std::vector<Edge> host_edges;       // kept edges in host ids
  std::vector<double> mask_values;    // sigmoid(mask) per kept edge
};

// Output row at v with scope edge weights scaled by sigmoid(mask).
// `mask` is indexed like explainer_scope(g, v, model.depth()).edges.
Eigen::RowVectorXd masked_forward(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                                  std::span<const double> mask, NodeId v);

struct MaskedLoss {
  double loss = 0.0;            // full explainer objective
  std::vector<double> grad;     // d loss / d mask
  Eigen::RowVectorXd probs;
};

MaskedLoss masked_loss(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                       std::span<const double> mask, NodeId v, int target,
                       const ExplainerHyper& hyper);

struct ExplainLog {
  std::vector<double> loss;  // objective per epoch, before the step
};

Explanation explain_node(const GcnModel& model, const Graph& g, const FeatureMatrix& x, NodeId v,
                         const ExplainerHyper& hyper, ExplainLog* log = nullptr);

// Explains every node (in parallel); predictions come from the model.
std::vector<Explanation> explain_all(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                                     const ExplainerHyper& hyper);

// One block per class id in [0, num_classes); blocks may be empty.
std::vector<ExplanationDB> group_by_predicted_class(std::span<const Explanation> explanations,
                                                    std::span<const int> predicted, int num_classes);

}  // namespace eegl

#endif  // EEGL_EXPLAINER_H_
