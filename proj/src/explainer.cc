#include "eegl/explainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eegl/error.h"
#include "eegl/parallel.h"
#include "eegl/random.h"

namespace eegl {
namespace {

double sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

// Forward and backward pass of the GCN restricted to the rows each layer
// actually needs at the center. Local nodes are in BFS order, so the rows
// within k hops form the prefix [0, within[k]).
class ScopeEvaluator {
 public:
  ScopeEvaluator(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                 const ExplainerScope& scope)
      : model_(model), scope_(scope) {
    if (x.rows() != g.num_nodes() || x.cols() != model.in_dim())
      throw Error(ErrorCode::kDimensionMismatch, "feature matrix shape does not match the model");
    const int depth = model.depth();
    within_.assign(depth + 1, 0);
    for (int d : scope.dist)
      for (int k = d; k <= depth; ++k) ++within_[k];
    const int n = static_cast<int>(scope.nodes.size());
    self_.resize(n);
    for (int i = 0; i < n; ++i) self_[i] = 1.0 / (g.degree(scope.nodes[i]) + 1.0);
    for (const Edge& e : scope.host_edges)
      norm_.push_back(1.0 / std::sqrt((g.degree(e.u) + 1.0) * (g.degree(e.v) + 1.0)));
    Eigen::MatrixXd local(within_[depth], x.cols());
    for (int i = 0; i < within_[depth]; ++i) local.row(i) = x.row(scope.nodes[i]);
    first_ = local * model.layers[0].weight;
  }

  // Logits at the center for edge scales s_e in [0, 1]. With `dlogits`,
  // also returns d(dlogits . logits)/d s_e in `dscale`.
  Eigen::RowVectorXd run(std::span<const double> scale, const Eigen::RowVectorXd* dlogits,
                         std::vector<double>* dscale) const {
    const int depth = model_.depth();
    std::vector<Eigen::MatrixXd> p(depth), z(depth);
    p[0] = first_;
    for (int l = 0; l < depth; ++l) {
      const int rows = within_[depth - 1 - l];
      z[l] = p[l].topRows(rows);
      for (int i = 0; i < rows; ++i) z[l].row(i) *= self_[i];
      for (size_t e = 0; e < scope_.edges.size(); ++e) {
        const auto [a, b] = scope_.edges[e];
        const double w = scale[e] * norm_[e];
        if (a < rows) z[l].row(a) += w * p[l].row(b);
        if (b < rows) z[l].row(b) += w * p[l].row(a);
      }
      z[l].rowwise() += model_.layers[l].bias;
      if (l + 1 < depth) p[l + 1] = z[l].cwiseMax(0.0) * model_.layers[l + 1].weight;
    }
    Eigen::RowVectorXd logits = z[depth - 1].row(0);
    if (!dlogits) return logits;

    dscale->assign(scope_.edges.size(), 0.0);
    Eigen::MatrixXd dz = *dlogits;
    for (int l = depth - 1; l >= 0; --l) {
      const int rows = within_[depth - 1 - l];
      Eigen::MatrixXd dp = Eigen::MatrixXd::Zero(p[l].rows(), p[l].cols());
      for (int i = 0; i < rows; ++i) dp.row(i) = self_[i] * dz.row(i);
      for (size_t e = 0; e < scope_.edges.size(); ++e) {
        const auto [a, b] = scope_.edges[e];
        const double w = scale[e] * norm_[e];
        if (a < rows) {
          dp.row(b) += w * dz.row(a);
          (*dscale)[e] += norm_[e] * dz.row(a).dot(p[l].row(b));
        }
        if (b < rows) {
          dp.row(a) += w * dz.row(b);
          (*dscale)[e] += norm_[e] * dz.row(b).dot(p[l].row(a));
        }
      }
      if (l == 0) break;
      Eigen::MatrixXd dh = dp * model_.layers[l].weight.transpose();
      dz = dh.cwiseProduct((z[l - 1].array() > 0.0).cast<double>().matrix());
    }
    return logits;
  }

 private:
  const GcnModel& model_;
  const ExplainerScope& scope_;
  std::vector<int> within_;
  std::vector<double> self_;
  std::vector<double> norm_;
  Eigen::MatrixXd first_;  // layer-0 features times weights, mask independent
};

Eigen::RowVectorXd softmax_row(const Eigen::RowVectorXd& logits) {
  Eigen::RowVectorXd p = (logits.array() - logits.maxCoeff()).exp().matrix();
  return p / p.sum();
}

MaskedLoss objective(const ScopeEvaluator& eval, std::span<const double> mask, int target,
                     const ExplainerHyper& hyper) {
  std::vector<double> s(mask.size());
  for (size_t e = 0; e < mask.size(); ++e) s[e] = sigmoid(mask[e]);
  Eigen::RowVectorXd logits = eval.run(s, nullptr, nullptr);
  MaskedLoss out;
  out.probs = softmax_row(logits);
  Eigen::RowVectorXd dlogits = out.probs;
  dlogits(target) -= 1.0;
  std::vector<double> dscale;
  eval.run(s, &dlogits, &dscale);
  out.loss = -std::log(std::max(out.probs(target), 1e-300));
  out.grad.resize(mask.size());
  for (size_t e = 0; e < mask.size(); ++e) {
    const double se = std::clamp(s[e], 1e-12, 1.0 - 1e-12);
    const double ds = s[e] * (1.0 - s[e]);
    out.loss += hyper.size_penalty * s[e];
    out.loss -= hyper.entropy_penalty * (se * std::log(se) + (1.0 - se) * std::log(1.0 - se));
    out.grad[e] = ds * (dscale[e] + hyper.size_penalty +
                        hyper.entropy_penalty * std::log((1.0 - se) / se));
  }
  return out;
}

void check_mask(const ExplainerScope& scope, std::span<const double> mask) {
  if (mask.size() != scope.edges.size())
    throw Error(ErrorCode::kMaskShapeMismatch, "mask length differs from the scope edge count");
}

Explanation denoise(const ExplainerScope& scope, const std::vector<double>& s, NodeId v,
                    int target, int keep_top) {
  Explanation out;
  out.source = v;
  out.predicted_class = target;
  const int m = static_cast<int>(s.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s[a] > s[b]; });
  std::vector<int> kept(order.begin(), order.begin() + std::min(m, keep_top));

  // Component of the center (local 0) among the kept edges.
  const int n = static_cast<int>(scope.nodes.size());
  std::vector<char> reached(n, 0);
  reached[0] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (int e : kept) {
      const auto [a, b] = scope.edges[e];
      if (reached[a] != reached[b]) {
        reached[a] = reached[b] = 1;
        grew = true;
      }
    }
  }
  std::vector<int> edges;
  for (int e : kept)
    if (reached[scope.edges[e].u]) edges.push_back(e);
  if (edges.empty()) {
    for (int e : order) {
      if (scope.edges[e].u == 0 || scope.edges[e].v == 0) {
        edges.push_back(e);
        reached[scope.edges[e].u] = reached[scope.edges[e].v] = 1;
        break;
      }
    }
  }
  std::sort(edges.begin(), edges.end());

  for (int i = 0; i < n; ++i)
    if (reached[i]) out.to_host.push_back(scope.nodes[i]);
  std::sort(out.to_host.begin(), out.to_host.end());
  auto compact = [&](NodeId host) {
    return static_cast<NodeId>(std::lower_bound(out.to_host.begin(), out.to_host.end(), host) -
                               out.to_host.begin());
  };
  std::vector<Edge> local;
  for (int e : edges) {
    out.host_edges.push_back(scope.host_edges[e]);
    out.mask_values.push_back(s[e]);
    local.push_back(make_edge(compact(scope.host_edges[e].u), compact(scope.host_edges[e].v)));
  }
  out.subgraph.emplace(build_graph(static_cast<int>(out.to_host.size()), local), compact(v));
  return out;
}

Explanation explain_with_target(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                                NodeId v, std::optional<int> target, const ExplainerHyper& hyper,
                                ExplainLog* log) {
  if (v < 0 || v >= g.num_nodes()) throw Error(ErrorCode::kNodeOutOfRange, "node out of range");
  if (hyper.keep_top_edges < 1) throw Error(ErrorCode::kBadParams, "keep_top_edges must be >= 1");
  ExplainerScope scope = explainer_scope(g, v, model.depth());
  ScopeEvaluator eval(model, g, x, scope);
  if (!target) {
    std::vector<double> open(scope.edges.size(), 1.0);
    Eigen::Index best;
    eval.run(open, nullptr, nullptr).maxCoeff(&best);
    target = static_cast<int>(best);
  }
  if (scope.edges.empty()) {
    Explanation e;
    e.source = v;
    e.predicted_class = *target;
    return e;
  }

  std::mt19937_64 rng(hyper.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(v));
  const size_t m = scope.edges.size();
  std::vector<double> mask(m), mom(m, 0.0), vel(m, 0.0);
  for (double& w : mask) w = normal(rng, 0.0, hyper.init_sd);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  double b1 = 1.0, b2 = 1.0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    MaskedLoss ml = objective(eval, mask, *target, hyper);
    if (log) log->loss.push_back(ml.loss);
    b1 *= kBeta1;
    b2 *= kBeta2;
    const double step = hyper.learning_rate * std::sqrt(1.0 - b2) / (1.0 - b1);
    for (size_t e = 0; e < m; ++e) {
      mom[e] = kBeta1 * mom[e] + (1.0 - kBeta1) * ml.grad[e];
      vel[e] = kBeta2 * vel[e] + (1.0 - kBeta2) * ml.grad[e] * ml.grad[e];
      mask[e] -= step * mom[e] / (std::sqrt(vel[e]) + kEps);
    }
  }
  if (log) log->loss.push_back(objective(eval, mask, *target, hyper).loss);
  std::vector<double> s(m);
  for (size_t e = 0; e < m; ++e) s[e] = sigmoid(mask[e]);
  return denoise(scope, s, v, *target, hyper.keep_top_edges);
}

}  // namespace

nlohmann::json explainer_hyper_to_json(const ExplainerHyper& h) {
  return {{"epochs", h.epochs},
          {"learning_rate", h.learning_rate},
          {"size_penalty", h.size_penalty},
          {"entropy_penalty", h.entropy_penalty},
          {"keep_top_edges", h.keep_top_edges},
          {"init_sd", h.init_sd},
          {"seed", h.seed}};
}

ExplainerHyper explainer_hyper_from_json(const nlohmann::json& j) {
  ExplainerHyper h;
  h.epochs = j.value("epochs", h.epochs);
  h.learning_rate = j.value("learning_rate", h.learning_rate);
  h.size_penalty = j.value("size_penalty", h.size_penalty);
  h.entropy_penalty = j.value("entropy_penalty", h.entropy_penalty);
  h.keep_top_edges = j.value("keep_top_edges", h.keep_top_edges);
  h.init_sd = j.value("init_sd", h.init_sd);
  h.seed = j.value("seed", h.seed);
  if (h.epochs < 0 || h.learning_rate < 0 || h.size_penalty < 0 || h.entropy_penalty < 0 ||
      h.keep_top_edges < 1 || h.init_sd < 0)
    throw Error(ErrorCode::kInvalidConfig, "invalid explainer hyperparameters");
  return h;
}

ExplainerScope explainer_scope(const Graph& g, NodeId v, int depth) {
  if (v < 0 || v >= g.num_nodes()) throw Error(ErrorCode::kNodeOutOfRange, "node out of range");
  ExplainerScope s;
  s.center = v;
  s.depth = depth;
  std::vector<int> local(g.num_nodes(), -1);
  local[v] = 0;
  s.nodes.push_back(v);
  s.dist.push_back(0);
  for (size_t head = 0; head < s.nodes.size(); ++head) {
    const NodeId u = s.nodes[head];
    if (s.dist[head] == depth) continue;
    for (NodeId w : g.neighbors(u)) {
      if (local[w] >= 0) continue;
      local[w] = static_cast<int>(s.nodes.size());
      s.nodes.push_back(w);
      s.dist.push_back(s.dist[head] + 1);
    }
  }
  for (const Edge& e : g.edges()) {
    const int a = local[e.u], b = local[e.v];
    if (a < 0 || b < 0 || std::min(s.dist[a], s.dist[b]) >= depth) continue;
    s.host_edges.push_back(e);
    s.edges.push_back(Edge{a, b});
  }
  return s;
}

Eigen::RowVectorXd masked_forward(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                                  std::span<const double> mask, NodeId v) {
  ExplainerScope scope = explainer_scope(g, v, model.depth());
  check_mask(scope, mask);
  ScopeEvaluator eval(model, g, x, scope);
  std::vector<double> s(mask.size());
  for (size_t e = 0; e < mask.size(); ++e) s[e] = sigmoid(mask[e]);
  return softmax_row(eval.run(s, nullptr, nullptr));
}

MaskedLoss masked_loss(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                       std::span<const double> mask, NodeId v, int target,
                       const ExplainerHyper& hyper) {
  ExplainerScope scope = explainer_scope(g, v, model.depth());
  check_mask(scope, mask);
  if (target < 0 || target >= model.num_classes)
    throw Error(ErrorCode::kLabelOutOfRange, "target class out of range");
  ScopeEvaluator eval(model, g, x, scope);
  return objective(eval, mask, target, hyper);
}

Explanation explain_node(const GcnModel& model, const Graph& g, const FeatureMatrix& x, NodeId v,
                         const ExplainerHyper& hyper, ExplainLog* log) {
  return explain_with_target(model, g, x, v, std::nullopt, hyper, log);
}

std::vector<Explanation> explain_all(const GcnModel& model, const Graph& g, const FeatureMatrix& x,
                                     const ExplainerHyper& hyper) {
  std::vector<int> predicted = predict(model, x);
  std::vector<Explanation> out(g.num_nodes());
  parallel_for(g.num_nodes(), [&](int v) {
    out[v] = explain_with_target(model, g, x, v, predicted[v], hyper, nullptr);
  });
  return out;
}

std::vector<ExplanationDB> group_by_predicted_class(std::span<const Explanation> explanations,
                                                    std::span<const int> predicted, int num_classes) {
  if (explanations.size() != predicted.size())
    throw Error(ErrorCode::kDimensionMismatch, "one prediction per explanation required");
  std::vector<ExplanationDB> blocks(num_classes);
  for (int c = 0; c < num_classes; ++c) blocks[c].class_label = c;
  for (size_t i = 0; i < explanations.size(); ++i) {
    if (predicted[i] < 0 || predicted[i] >= num_classes)
      throw Error(ErrorCode::kLabelOutOfRange, "predicted class out of range");
    blocks[predicted[i]].graphs.push_back(explanations[i].subgraph);
  }
  return blocks;
}

}  // namespace eegl
