#ifndef EEGL_GCN_H_
#define EEGL_GCN_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <json.hpp>

#include "eegl/graph.h"

namespace eegl {

using FeatureMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LabeledNode {
  NodeId node;
  int label;
};

struct GcnHyper {
  // One entry per hidden layer; the output layer is added on top.
  std::vector<int> hidden_dims{32, 32};
  double dropout = 0.0;
  int epochs = 200;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  std::uint64_t seed = 1;

  bool operator==(const GcnHyper&) const = default;
};

nlohmann::json hyper_to_json(const GcnHyper& h);
GcnHyper hyper_from_json(const nlohmann::json& j);

struct GcnLayer {
  Eigen::MatrixXd weight;    // in_dim x out_dim
  Eigen::RowVectorXd bias;   // out_dim
};

struct GcnModel {
  std::vector<GcnLayer> layers;
  int num_classes = 0;
  SparseMatrix norm_adj;
  GcnHyper hyper;

  int in_dim() const { return static_cast<int>(layers.front().weight.rows()); }
  int depth() const { return static_cast<int>(layers.size()); }
  long num_parameters() const;
};

// D^-1/2 (A + I) D^-1/2 with degrees counted including the self-loop.
SparseMatrix normalize_adjacency(const Graph& g);

// Glorot-uniform weights, zero biases.
GcnModel init_model(const Graph& g, int in_dim, int num_classes, const GcnHyper& hyper);

struct ForwardResult {
  Eigen::MatrixXd logits;
  Eigen::MatrixXd probs;
};

ForwardResult forward(const GcnModel& model, const FeatureMatrix& x);
// Same, with an explicit propagation matrix in place of model.norm_adj.
ForwardResult forward(const GcnModel& model, const SparseMatrix& adj, const FeatureMatrix& x);

// Row-wise softmax with max subtraction.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

struct LossGrad {
  double loss = 0.0;  // mean cross-entropy + weight_decay/2 * sum ||W||^2
  std::vector<GcnLayer> grads;
};

// Loss and its exact gradient. With a non-null rng, dropout is sampled
// from it; otherwise the pass is deterministic.
LossGrad loss_and_gradient(const GcnModel& model, const FeatureMatrix& x,
                           std::span<const LabeledNode> train, std::mt19937_64* dropout_rng = nullptr);

struct TrainLog {
  std::vector<double> loss;  // one entry per epoch, before the step
};

// Full-batch Adam. Deterministic given hyper.seed.
GcnModel train(const Graph& g, const FeatureMatrix& x, std::span<const LabeledNode> train,
               int num_classes, const GcnHyper& hyper, TrainLog* log = nullptr);

// Argmax per row, lowest class on ties.
std::vector<int> predict(const GcnModel& model, const FeatureMatrix& x);

struct ValidationSplit {
  std::vector<LabeledNode> train;
  std::vector<LabeledNode> validation;
};

// Combinations in the order hidden, lr, dropout, epochs, weight_decay.
std::vector<GcnHyper> default_grid(int num_hidden_layers = 2, std::uint64_t seed = 1);

// Hyper maximizing mean validation weighted F1; ties go to fewer
// parameters, then earlier grid position.
GcnHyper grid_search(const Graph& g, const FeatureMatrix& x, std::span<const ValidationSplit> splits,
                     int num_classes, std::span<const GcnHyper> grid);

// Checkpoint: one JSON header line, then the weights as little-endian
// doubles (each layer's weight in column-major order, then its bias).
void save_model(const GcnModel& model, const std::string& path);
// The adjacency is not stored; it is rebuilt from `g`.
GcnModel load_model(const std::string& path, const Graph& g);

}  // namespace eegl

#endif  // EEGL_GCN_H_
