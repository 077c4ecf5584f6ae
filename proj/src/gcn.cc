#include "eegl/gcn.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "eegl/error.h"
#include "eegl/graph_io.h"
#include "eegl/metrics.h"
#include "eegl/random.h"

namespace eegl {
namespace {

struct Cache {
  std::vector<Eigen::MatrixXd> inputs;   // input to layer l (after dropout)
  std::vector<Eigen::MatrixXd> pre;      // pre-activation of layer l
  std::vector<Eigen::MatrixXd> dropout;  // scaled keep masks, hidden layers only
};

Eigen::MatrixXd run_layers(const GcnModel& model, const SparseMatrix& adj, const FeatureMatrix& x,
                           std::mt19937_64* rng, Cache* cache) {
  if (x.cols() != model.in_dim() || x.rows() != adj.rows())
    throw Error(ErrorCode::kDimensionMismatch, "feature matrix shape does not match the model");
  const double p = model.hyper.dropout;
  const bool drop = rng != nullptr && p > 0.0;
  Eigen::MatrixXd h = x;
  for (int l = 0; l < model.depth(); ++l) {
    const GcnLayer& layer = model.layers[l];
    Eigen::MatrixXd z = adj * (h * layer.weight);
    z.rowwise() += layer.bias;
    if (cache) {
      cache->inputs.push_back(h);
      cache->pre.push_back(z);
    }
    if (l + 1 == model.depth()) return z;
    h = z.cwiseMax(0.0);
    if (drop) {
      Eigen::MatrixXd keep(h.rows(), h.cols());
      for (Eigen::Index j = 0; j < keep.cols(); ++j)
        for (Eigen::Index i = 0; i < keep.rows(); ++i)
          keep(i, j) = uniform01(*rng) < p ? 0.0 : 1.0 / (1.0 - p);
      h = h.cwiseProduct(keep);
      if (cache) cache->dropout.push_back(std::move(keep));
    } else if (cache) {
      cache->dropout.emplace_back();
    }
  }
  return h;
}

void check_train(const GcnModel& model, std::span<const LabeledNode> train, Eigen::Index n) {
  if (train.empty()) throw Error(ErrorCode::kEmptyTrainSet, "no training nodes");
  for (const LabeledNode& t : train) {
    if (t.node < 0 || t.node >= n) throw Error(ErrorCode::kNodeOutOfRange, "training node out of range");
    if (t.label < 0 || t.label >= model.num_classes)
      throw Error(ErrorCode::kLabelOutOfRange, "training label out of range");
  }
}

void put_doubles(std::string& out, const double* data, Eigen::Index count) {
  const size_t bytes = static_cast<size_t>(count) * sizeof(double);
  const size_t at = out.size();
  out.resize(at + bytes);
  std::memcpy(out.data() + at, data, bytes);
}

}  // namespace

nlohmann::json hyper_to_json(const GcnHyper& h) {
  return {{"hidden_dims", h.hidden_dims}, {"dropout", h.dropout},
          {"epochs", h.epochs},           {"learning_rate", h.learning_rate},
          {"weight_decay", h.weight_decay}, {"seed", h.seed}};
}

GcnHyper hyper_from_json(const nlohmann::json& j) {
  GcnHyper h;
  h.hidden_dims = j.value("hidden_dims", h.hidden_dims);
  h.dropout = j.value("dropout", h.dropout);
  h.epochs = j.value("epochs", h.epochs);
  h.learning_rate = j.value("learning_rate", h.learning_rate);
  h.weight_decay = j.value("weight_decay", h.weight_decay);
  h.seed = j.value("seed", h.seed);
  if (h.hidden_dims.empty() || h.epochs < 0 || h.learning_rate < 0 || h.dropout < 0 ||
      h.dropout >= 1 || h.weight_decay < 0)
    throw Error(ErrorCode::kInvalidConfig, "invalid GCN hyperparameters");
  for (int d : h.hidden_dims)
    if (d < 1) throw Error(ErrorCode::kInvalidConfig, "hidden dims must be positive");
  return h;
}

long GcnModel::num_parameters() const {
  long total = 0;
  for (const GcnLayer& l : layers) total += l.weight.size() + l.bias.size();
  return total;
}

SparseMatrix normalize_adjacency(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (int v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<size_t>(n + 2 * g.num_edges()));
  for (int v = 0; v < n; ++v) {
    entries.emplace_back(v, v, inv_sqrt[v] * inv_sqrt[v]);
    for (NodeId w : g.neighbors(v)) entries.emplace_back(v, w, inv_sqrt[v] * inv_sqrt[w]);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

GcnModel init_model(const Graph& g, int in_dim, int num_classes, const GcnHyper& hyper) {
  if (hyper.hidden_dims.empty()) throw Error(ErrorCode::kInvalidConfig, "need at least one hidden layer");
  if (in_dim < 1 || num_classes < 1) throw Error(ErrorCode::kDimensionMismatch, "bad model dimensions");
  GcnModel model;
  model.num_classes = num_classes;
  model.hyper = hyper;
  model.norm_adj = normalize_adjacency(g);
  std::mt19937_64 rng(hyper.seed);
  std::vector<int> dims{in_dim};
  dims.insert(dims.end(), hyper.hidden_dims.begin(), hyper.hidden_dims.end());
  dims.push_back(num_classes);
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const double a = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
    GcnLayer layer{Eigen::MatrixXd(dims[l], dims[l + 1]), Eigen::RowVectorXd::Zero(dims[l + 1])};
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) layer.weight(i, j) = uniform(rng, -a, a);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - mx).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

ForwardResult forward(const GcnModel& model, const SparseMatrix& adj, const FeatureMatrix& x) {
  ForwardResult r;
  r.logits = run_layers(model, adj, x, nullptr, nullptr);
  r.probs = softmax_rows(r.logits);
  return r;
}

ForwardResult forward(const GcnModel& model, const FeatureMatrix& x) {
  return forward(model, model.norm_adj, x);
}

LossGrad loss_and_gradient(const GcnModel& model, const FeatureMatrix& x,
                           std::span<const LabeledNode> train, std::mt19937_64* dropout_rng) {
  check_train(model, train, x.rows());
  Cache cache;
  Eigen::MatrixXd logits = run_layers(model, model.norm_adj, x, dropout_rng, &cache);
  Eigen::MatrixXd probs = softmax_rows(logits);
  const double scale = 1.0 / static_cast<double>(train.size());
  const double wd = model.hyper.weight_decay;

  LossGrad out;
  Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  for (const LabeledNode& t : train) {
    out.loss -= scale * std::log(std::max(probs(t.node, t.label), 1e-300));
    dz.row(t.node) += scale * probs.row(t.node);
    dz(t.node, t.label) -= scale;
  }
  out.grads.resize(model.layers.size());
  for (int l = model.depth() - 1; l >= 0; --l) {
    const GcnLayer& layer = model.layers[l];
    out.loss += 0.5 * wd * layer.weight.squaredNorm();
    Eigen::MatrixXd dp = model.norm_adj.transpose() * dz;
    out.grads[l].weight = cache.inputs[l].transpose() * dp + wd * layer.weight;
    out.grads[l].bias = dz.colwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd dh = dp * layer.weight.transpose();
    if (cache.dropout[l - 1].size() > 0) dh = dh.cwiseProduct(cache.dropout[l - 1]);
    dz = dh.cwiseProduct((cache.pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return out;
}

GcnModel train(const Graph& g, const FeatureMatrix& x, std::span<const LabeledNode> train,
               int num_classes, const GcnHyper& hyper, TrainLog* log) {
  if (x.rows() != g.num_nodes())
    throw Error(ErrorCode::kDimensionMismatch, "feature rows differ from node count");
  GcnModel model = init_model(g, static_cast<int>(x.cols()), num_classes, hyper);
  check_train(model, train, x.rows());
  std::mt19937_64 dropout_rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::vector<GcnLayer> m1, m2;
  for (const GcnLayer& l : model.layers) {
    m1.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                  Eigen::RowVectorXd::Zero(l.bias.size())});
  }
  m2 = m1;
  double b1 = 1.0, b2 = 1.0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    LossGrad lg = loss_and_gradient(model, x, train, &dropout_rng);
    if (log) log->loss.push_back(lg.loss);
    b1 *= kBeta1;
    b2 *= kBeta2;
    const double step = hyper.learning_rate * std::sqrt(1.0 - b2) / (1.0 - b1);
    for (size_t l = 0; l < model.layers.size(); ++l) {
      auto update = [&](auto& param, const auto& grad, auto& v1, auto& v2) {
        v1 = kBeta1 * v1 + (1.0 - kBeta1) * grad;
        v2 = kBeta2 * v2 + (1.0 - kBeta2) * grad.cwiseProduct(grad);
        param.array() -= step * v1.array() / (v2.array().sqrt() + kEps);
      };
      update(model.layers[l].weight, lg.grads[l].weight, m1[l].weight, m2[l].weight);
      update(model.layers[l].bias, lg.grads[l].bias, m1[l].bias, m2[l].bias);
    }
  }
  return model;
}

std::vector<int> predict(const GcnModel& model, const FeatureMatrix& x) {
  Eigen::MatrixXd logits = run_layers(model, model.norm_adj, x, nullptr, nullptr);
  std::vector<int> out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best;
    logits.row(i).maxCoeff(&best);
    out[i] = static_cast<int>(best);
  }
  return out;
}

std::vector<GcnHyper> default_grid(int num_hidden_layers, std::uint64_t seed) {
  std::vector<GcnHyper> grid;
  for (int hidden : {16, 32, 64})
    for (double lr : {0.01, 0.005})
      for (double dropout : {0.0, 0.5})
        for (int epochs : {200, 500})
          for (double wd : {0.0, 5e-4})
            grid.push_back({std::vector<int>(num_hidden_layers, hidden), dropout, epochs, lr, wd, seed});
  return grid;
}

GcnHyper grid_search(const Graph& g, const FeatureMatrix& x, std::span<const ValidationSplit> splits,
                     int num_classes, std::span<const GcnHyper> grid) {
  if (grid.empty()) throw Error(ErrorCode::kEmptyGrid, "hyperparameter grid is empty");
  if (splits.empty()) throw Error(ErrorCode::kEmptyTrainSet, "grid search needs at least one split");
  int best = -1;
  double best_score = 0.0;
  long best_params = 0;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    double total = 0.0;
    long params = 0;
    for (const ValidationSplit& s : splits) {
      GcnModel model = train(g, x, s.train, num_classes, grid[i]);
      params = model.num_parameters();
      std::vector<int> pred = predict(model, x);
      std::vector<int> truth, guess;
      for (const LabeledNode& v : s.validation) {
        truth.push_back(v.label);
        guess.push_back(pred[v.node]);
      }
      total += weighted_f1(confusion_matrix(truth, guess, num_classes));
    }
    const double score = total / static_cast<double>(splits.size());
    if (best < 0 || score > best_score || (score == best_score && params < best_params)) {
      best = i;
      best_score = score;
      best_params = params;
    }
  }
  return grid[best];
}

void save_model(const GcnModel& model, const std::string& path) {
  nlohmann::json header{{"format", "eegl-gcn-1"},
                        {"in_dim", model.in_dim()},
                        {"num_classes", model.num_classes},
                        {"num_nodes", model.norm_adj.rows()},
                        {"hyper", hyper_to_json(model.hyper)}};
  for (const GcnLayer& l : model.layers) header["layers"].push_back({l.weight.rows(), l.weight.cols()});
  std::string out = header.dump() + "\n";
  for (const GcnLayer& l : model.layers) {
    put_doubles(out, l.weight.data(), l.weight.size());
    put_doubles(out, l.bias.data(), l.bias.size());
  }
  write_text_file(path, out);
}

GcnModel load_model(const std::string& path, const Graph& g) {
  const std::string bytes = read_text_file(path);
  const size_t eol = bytes.find('\n');
  if (eol == std::string::npos) throw Error(ErrorCode::kParseError, "checkpoint has no header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, eol));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("checkpoint header: ") + e.what());
  }
  if (header.value("format", "") != "eegl-gcn-1")
    throw Error(ErrorCode::kParseError, "unknown checkpoint format");
  if (header["num_nodes"].get<long>() != g.num_nodes())
    throw Error(ErrorCode::kDimensionMismatch, "checkpoint was trained on a different node count");
  GcnModel model;
  model.num_classes = header["num_classes"];
  model.hyper = hyper_from_json(header["hyper"]);
  model.norm_adj = normalize_adjacency(g);
  size_t at = eol + 1;
  auto take = [&](double* dst, Eigen::Index count) {
    const size_t need = static_cast<size_t>(count) * sizeof(double);
    if (at + need > bytes.size()) throw Error(ErrorCode::kParseError, "checkpoint payload truncated");
    std::memcpy(dst, bytes.data() + at, need);
    at += need;
  };
  for (const auto& shape : header["layers"]) {
    GcnLayer l{Eigen::MatrixXd(shape[0].get<long>(), shape[1].get<long>()),
               Eigen::RowVectorXd(shape[1].get<long>())};
    take(l.weight.data(), l.weight.size());
    take(l.bias.data(), l.bias.size());
    model.layers.push_back(std::move(l));
  }
  if (at != bytes.size()) throw Error(ErrorCode::kParseError, "trailing bytes in checkpoint");
  return model;
}

}  // namespace eegl
