#include "eegl/gcn.h"

#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "eegl/error.h"
#include "eegl/metrics.h"
#include "eegl/wl.h"
#include "oracles.h"

namespace eegl {
namespace {

Graph cycle(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back(make_edge(i, (i + 1) % n));
  return build_graph(n, edges);
}

// Dense reference forward with explicit loops.
Eigen::MatrixXd reference_logits(const GcnModel& model, const Graph& g, const Eigen::MatrixXd& x) {
  const int n = g.num_nodes();
  auto adj = oracle::adjacency(g);
  std::vector<double> deg(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) deg[i] += adj[i][j];
  Eigen::MatrixXd h = x;
  for (int l = 0; l < model.depth(); ++l) {
    const auto& w = model.layers[l].weight;
    Eigen::MatrixXd z(n, w.cols());
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < w.cols(); ++c) {
        double s = model.layers[l].bias(c);
        for (int j = 0; j < n; ++j) {
          if (i != j && !adj[i][j]) continue;
          double a = 1.0 / std::sqrt(deg[i] * deg[j]);
          for (int k = 0; k < w.rows(); ++k) s += a * h(j, k) * w(k, c);
        }
        z(i, c) = s;
      }
    }
    h = l + 1 == model.depth() ? z : z.cwiseMax(0.0).eval();
  }
  return h;
}

Eigen::MatrixXd random_features(std::mt19937_64& rng, int n, int d) {
  Eigen::MatrixXd x(n, d);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = u(rng);
  return x;
}

TEST(NormalizeAdjacencyTest, Examples) {
  SparseMatrix one = normalize_adjacency(build_graph(1, std::vector<Edge>{}));
  EXPECT_DOUBLE_EQ(one.coeff(0, 0), 1.0);
  Eigen::MatrixXd k2 = normalize_adjacency(build_graph(2, {{0, 1}}));
  EXPECT_TRUE(k2.isApproxToConstant(0.5, 1e-15));
  Eigen::MatrixXd c4 = normalize_adjacency(cycle(4));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(c4(i, i), 1.0 / 3, 1e-15);
    EXPECT_NEAR(c4(i, (i + 1) % 4), 1.0 / 3, 1e-15);
    EXPECT_NEAR(c4(i, (i + 2) % 4), 0.0, 1e-15);
  }
  EXPECT_TRUE(c4.isApprox(c4.transpose()));
}

TEST(ForwardTest, MatchesDenseReferenceAndSoftmaxSumsToOne) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = oracle::random_graph(rng, 8, 0.35);
    GcnHyper h;
    h.hidden_dims = {5, 4};
    h.seed = trial;
    GcnModel model = init_model(g, 3, 3, h);
    for (auto& l : model.layers) l.bias.setRandom();
    Eigen::MatrixXd x = random_features(rng, 8, 3);
    ForwardResult r = forward(model, x);
    EXPECT_LT((r.logits - reference_logits(model, g, x)).cwiseAbs().maxCoeff(), 1e-12);
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(r.probs.row(i).sum(), 1.0, 1e-9);
  }
}

TEST(ForwardTest, ZeroWeightsGiveUniformSoftmax) {
  GcnModel model = init_model(cycle(5), 2, 4, GcnHyper{});
  for (auto& l : model.layers) l.weight.setZero();
  ForwardResult r = forward(model, Eigen::MatrixXd::Ones(5, 2));
  EXPECT_TRUE(r.probs.isApproxToConstant(0.25, 1e-12));
}

TEST(ForwardTest, DimensionMismatch) {
  GcnModel model = init_model(cycle(5), 2, 2, GcnHyper{});
  EXPECT_THROW(forward(model, Eigen::MatrixXd::Ones(5, 3)), Error);
  EXPECT_THROW(forward(model, Eigen::MatrixXd::Ones(4, 2)), Error);
}

TEST(ForwardTest, WlCeilingWithConstantFeatures) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = oracle::random_graph(rng, 12, 0.25);
    std::vector<LabeledNode> train;
    for (int v = 0; v < 12; v += 2) train.push_back({v, v % 3});
    GcnHyper h;
    h.epochs = 30;
    h.seed = trial;
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(12, 4);
    GcnModel model = eegl::train(g, x, train, 3, h);
    ForwardResult r = forward(model, x);
    NodePartition wl = wl_refine(g);
    for (int u = 0; u < 12; ++u)
      for (int v = 0; v < 12; ++v)
        if (wl.class_of[u] == wl.class_of[v])
          EXPECT_LT((r.logits.row(u) - r.logits.row(v)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(GradientTest, MatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6 + trial;
    Graph g = oracle::random_connected_graph(rng, n, 0.3);
    GcnHyper h;
    h.hidden_dims = {4, 3};
    h.weight_decay = 0.01;
    h.seed = trial;
    GcnModel model = init_model(g, 3, 2, h);
    for (auto& l : model.layers) l.bias.setRandom();
    Eigen::MatrixXd x = random_features(rng, n, 3);
    std::vector<LabeledNode> train{{0, 0}, {1, 1}, {2, 1}, {n - 1, 0}};
    LossGrad lg = loss_and_gradient(model, x, train);
    const double eps = 1e-5;
    double worst = 0.0;
    for (int l = 0; l < model.depth(); ++l) {
      auto check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + eps;
        const double up = loss_and_gradient(model, x, train).loss;
        param = saved - eps;
        const double down = loss_and_gradient(model, x, train).loss;
        param = saved;
        const double numeric = (up - down) / (2 * eps);
        worst = std::max(worst, std::abs(numeric - analytic) / std::max(1e-6, std::abs(numeric) + std::abs(analytic)));
      };
      for (Eigen::Index i = 0; i < model.layers[l].weight.size(); ++i)
        check(model.layers[l].weight.data()[i], lg.grads[l].weight.data()[i]);
      for (Eigen::Index i = 0; i < model.layers[l].bias.size(); ++i)
        check(model.layers[l].bias.data()[i], lg.grads[l].bias.data()[i]);
    }
    EXPECT_LT(worst, 1e-4);
  }
}

TEST(TrainTest, TwoCliquesReachPerfectTrainAccuracy) {
  std::vector<Edge> edges;
  for (int block = 0; block < 2; ++block)
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b) edges.push_back(Edge{block * 5 + a, block * 5 + b});
  Graph g = build_graph(10, edges);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(10, 2);
  std::vector<LabeledNode> train;
  for (int v = 0; v < 10; ++v) {
    x(v, v / 5) = 1.0;
    train.push_back({v, v / 5});
  }
  TrainLog log;
  GcnModel model = eegl::train(g, x, train, 2, GcnHyper{}, &log);
  std::vector<int> pred = predict(model, x);
  for (int v = 0; v < 10; ++v) EXPECT_EQ(pred[v], v / 5);
  EXPECT_LT(log.loss.back(), log.loss.front());
}

TEST(TrainTest, BitwiseReproducibleAndErrors) {
  std::mt19937_64 rng(4);
  Graph g = oracle::random_connected_graph(rng, 15, 0.2);
  Eigen::MatrixXd x = random_features(rng, 15, 3);
  std::vector<LabeledNode> train{{0, 0}, {3, 1}, {5, 2}, {7, 0}};
  GcnHyper h;
  h.dropout = 0.5;
  h.epochs = 50;
  GcnModel a = eegl::train(g, x, train, 3, h);
  GcnModel b = eegl::train(g, x, train, 3, h);
  for (int l = 0; l < a.depth(); ++l) EXPECT_TRUE(a.layers[l].weight == b.layers[l].weight);
  EXPECT_THROW(eegl::train(g, x, std::vector<LabeledNode>{}, 3, h), Error);
  std::vector<LabeledNode> bad{{0, 3}};
  EXPECT_THROW(eegl::train(g, x, bad, 3, h), Error);
}

TEST(CheckpointTest, RoundTrip) {
  std::mt19937_64 rng(4);
  Graph g = oracle::random_connected_graph(rng, 9, 0.3);
  GcnModel model = init_model(g, 3, 2, GcnHyper{});
  auto path = std::filesystem::temp_directory_path() / "eegl_gcn_test.ckpt";
  save_model(model, path.string());
  GcnModel back = load_model(path.string(), g);
  Eigen::MatrixXd x = random_features(rng, 9, 3);
  EXPECT_TRUE(forward(model, x).logits == forward(back, x).logits);
  EXPECT_EQ(back.hyper, model.hyper);
  EXPECT_THROW(load_model(path.string(), cycle(4)), Error);
  std::filesystem::remove(path);
}

TEST(GridSearchTest, SingletonDegenerateAndDeterministic) {
  std::vector<Edge> edges;
  for (int block = 0; block < 2; ++block)
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b) edges.push_back(Edge{block * 6 + a, block * 6 + b});
  Graph g = build_graph(12, edges);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(12, 2);
  for (int v = 0; v < 12; ++v) x(v, v / 6) = 1.0;
  ValidationSplit split;
  for (int v = 0; v < 12; ++v) (v % 3 ? split.train : split.validation).push_back({v, v / 6});
  std::vector<ValidationSplit> splits{split};

  GcnHyper only;
  only.epochs = 20;
  std::vector<GcnHyper> single{only};
  EXPECT_EQ(grid_search(g, x, splits, 2, single), only);

  GcnHyper frozen = only;
  frozen.learning_rate = 0.0;
  frozen.seed = 7;
  GcnHyper moving = only;
  moving.epochs = 100;
  moving.seed = 7;
  std::vector<GcnHyper> grid{frozen, moving};
  GcnHyper chosen = grid_search(g, x, splits, 2, grid);
  EXPECT_EQ(grid_search(g, x, splits, 2, grid), chosen);
  // The frozen entry only wins if the untrained model is already perfect.
  GcnModel untrained = eegl::train(g, x, split.train, 2, frozen);
  std::vector<int> pred = predict(untrained, x);
  bool untrained_perfect = true;
  for (const auto& v : split.validation) untrained_perfect &= pred[v.node] == v.label;
  if (!untrained_perfect) EXPECT_EQ(chosen, moving);
  EXPECT_THROW(grid_search(g, x, splits, 2, std::vector<GcnHyper>{}), Error);
  EXPECT_EQ(default_grid().size(), 48u);
}

TEST(MetricsTest, WeightedF1) {
  EXPECT_DOUBLE_EQ(weighted_f1({{3, 0}, {0, 4}}), 100.0);
  EXPECT_NEAR(weighted_f1({{5, 0}, {5, 0}}), 100.0 / 3.0, 1e-12);
  // Class relabeling leaves the score unchanged.
  Confusion c{{4, 1, 0}, {2, 3, 1}, {0, 2, 5}};
  Confusion swapped{{5, 0, 2}, {0, 4, 1}, {1, 2, 3}};
  EXPECT_NEAR(weighted_f1(c), weighted_f1(swapped), 1e-12);
  EXPECT_THROW(weighted_f1({}), Error);
  MeanSd ms = mean_sd(std::vector<double>{1.0, 3.0});
  EXPECT_DOUBLE_EQ(ms.mean, 2.0);
  EXPECT_DOUBLE_EQ(ms.sd, 1.0);
}

}  // namespace
}  // namespace eegl
