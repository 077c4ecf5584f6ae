#include "eegl/annotate.h"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <set>
#include <sstream>
#include <tuple>

#include "eegl/error.h"
#include "eegl/graph_io.h"
#include "eegl/metrics.h"
#include "eegl/parallel.h"
#include "eegl/random.h"
#include "eegl/subiso.h"

namespace eegl {
namespace {

bool better(const ScoredPattern& a, const ScoredPattern& b) {
  return std::forward_as_tuple(b.f1, a.pattern.num_edges(), a.code) <
         std::forward_as_tuple(a.f1, b.pattern.num_edges(), b.code);
}

}  // namespace

std::vector<char> match_column(const RootedPattern& p, const Graph& g) {
  Matcher matcher(p.graph(), p.root());
  std::vector<char> col(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) col[v] = matcher.matches_at(g, v);
  return col;
}

double pattern_f1(std::span<const char> column, int c, std::span<const LabeledNode> train) {
  if (train.empty()) throw Error(ErrorCode::kEmptyTrainSet, "pattern F1 needs training nodes");
  long tp = 0, fp = 0, fn = 0;
  for (const LabeledNode& t : train) {
    const bool hit = column[t.node];
    const bool pos = t.label == c;
    tp += hit && pos;
    fp += hit && !pos;
    fn += !hit && pos;
  }
  return binary_f1(tp, fp, fn);
}

double pattern_f1(const RootedPattern& p, int c, const Graph& g, std::span<const LabeledNode> train) {
  if (train.empty()) throw Error(ErrorCode::kEmptyTrainSet, "pattern F1 needs training nodes");
  return pattern_f1(match_column(p, g), c, train);
}

std::vector<std::vector<ScoredPattern>> score_patterns(
    const std::vector<FrequentPatternSet>& per_class, const Graph& g,
    std::span<const LabeledNode> train) {
  std::vector<std::pair<int, int>> jobs;
  for (int c = 0; c < static_cast<int>(per_class.size()); ++c)
    for (int i = 0; i < static_cast<int>(per_class[c].patterns.size()); ++i) jobs.emplace_back(c, i);
  std::vector<double> f1(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int j) {
    const MinedPattern& mp = per_class[jobs[j].first].patterns[jobs[j].second];
    f1[j] = pattern_f1(mp.pattern, jobs[j].first, g, train);
  });
  std::vector<std::vector<ScoredPattern>> out(per_class.size());
  for (size_t j = 0; j < jobs.size(); ++j) {
    const auto [c, i] = jobs[j];
    const MinedPattern& mp = per_class[c].patterns[i];
    out[c].push_back({mp.pattern, mp.code, c, f1[j], mp.support});
  }
  return out;
}

std::vector<ScoredPattern> top_patterns(const std::vector<std::vector<ScoredPattern>>& per_class,
                                        int d) {
  std::vector<std::vector<ScoredPattern>> ranked = per_class;
  for (auto& list : ranked) std::stable_sort(list.begin(), list.end(), better);
  std::vector<size_t> next(ranked.size(), 0);
  std::set<CanonicalCode> taken;
  std::vector<ScoredPattern> out;
  bool progress = true;
  while (static_cast<int>(out.size()) < d && progress) {
    progress = false;
    for (size_t c = 0; c < ranked.size() && static_cast<int>(out.size()) < d; ++c) {
      while (next[c] < ranked[c].size() && taken.count(ranked[c][next[c]].code)) ++next[c];
      if (next[c] == ranked[c].size()) continue;
      taken.insert(ranked[c][next[c]].code);
      out.push_back(ranked[c][next[c]++]);
      progress = true;
    }
  }
  return out;
}

FeatureMatrix update_features(const Graph& g, std::span<const RootedPattern> selected, int d) {
  if (static_cast<int>(selected.size()) > d)
    throw Error(ErrorCode::kTooManyPatterns, "more patterns than feature columns");
  FeatureMatrix x = FeatureMatrix::Zero(g.num_nodes(), d);
  std::vector<std::vector<char>> cols(selected.size());
  parallel_for(static_cast<int>(selected.size()),
               [&](int j) { cols[j] = match_column(selected[j], g); });
  for (size_t j = 0; j < cols.size(); ++j)
    for (NodeId v = 0; v < g.num_nodes(); ++v) x(v, static_cast<Eigen::Index>(j)) = cols[j][v];
  return x;
}

std::string init_kind_name(InitKind kind) {
  switch (kind) {
    case InitKind::kVanilla: return "vanilla";
    case InitKind::kRandom: return "random";
    case InitKind::kLabelEncoded: return "le";
    case InitKind::kAdversarial: return "adversarial";
  }
  return "vanilla";
}

InitKind init_kind_from_name(const std::string& name) {
  if (name == "vanilla") return InitKind::kVanilla;
  if (name == "random") return InitKind::kRandom;
  if (name == "le" || name == "label_encoded") return InitKind::kLabelEncoded;
  if (name == "adversarial") return InitKind::kAdversarial;
  throw Error(ErrorCode::kInvalidConfig, "unknown init mode: " + name);
}

FeatureMatrix init_features(const Graph& g, int d, const InitMode& mode,
                            std::span<const int> labels, int num_classes, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kDimensionTooSmall, "d must be >= 1");
  const int n = g.num_nodes();
  switch (mode.kind) {
    case InitKind::kVanilla:
      return FeatureMatrix::Ones(n, d);
    case InitKind::kRandom: {
      std::mt19937_64 rng(seed);
      FeatureMatrix x(n, d);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = uniform01(rng);
      return x;
    }
    case InitKind::kLabelEncoded: {
      if (static_cast<int>(labels.size()) != n)
        throw Error(ErrorCode::kMissingLabels, "label encoding needs one label per node");
      if (d < num_classes)
        throw Error(ErrorCode::kDimensionTooSmall, "d is smaller than the number of classes");
      FeatureMatrix x = FeatureMatrix::Zero(n, d);
      for (int i = 0; i < n; ++i) {
        if (labels[i] < 0 || labels[i] >= num_classes)
          throw Error(ErrorCode::kLabelOutOfRange, "label out of range");
        x(i, labels[i]) = 1.0;
      }
      return x;
    }
    case InitKind::kAdversarial:
      if (mode.patterns.empty())
        throw Error(ErrorCode::kInvalidConfig, "adversarial init needs at least one pattern");
      return update_features(g, mode.patterns, d);
  }
  return FeatureMatrix::Ones(n, d);
}

std::string features_to_csv(const FeatureMatrix& x) {
  std::string out;
  for (Eigen::Index j = 0; j < x.cols(); ++j) out += (j ? ",f" : "f") + std::to_string(j);
  out += '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) out += ',';
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x(i, j));
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

FeatureMatrix features_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "feature CSV is empty");
  const long cols = std::count(line.begin(), line.end(), ',') + 1;
  std::vector<double> values;
  long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (long j = 0; j < cols; ++j) {
      double v;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw Error(ErrorCode::kParseError, "bad number in feature CSV");
      values.push_back(v);
      p = next;
      if (j + 1 < cols) {
        if (p == end || *p != ',') throw Error(ErrorCode::kParseError, "short row in feature CSV");
        ++p;
      }
    }
    if (p != end) throw Error(ErrorCode::kParseError, "long row in feature CSV");
    ++rows;
  }
  FeatureMatrix x(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) x(i, j) = values[i * cols + j];
  return x;
}

void write_features_binary(const FeatureMatrix& x, const std::filesystem::path& path) {
  std::string out(16 + static_cast<size_t>(x.size()) * sizeof(double), '\0');
  const std::int64_t dims[2] = {x.rows(), x.cols()};
  std::memcpy(out.data(), dims, 16);
  size_t at = 16;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j, at += sizeof(double)) {
      const double v = x(i, j);
      std::memcpy(out.data() + at, &v, sizeof v);
    }
  write_text_file(path, out);
}

FeatureMatrix read_features_binary(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  if (bytes.size() < 16) throw Error(ErrorCode::kParseError, "feature file too short");
  std::int64_t dims[2];
  std::memcpy(dims, bytes.data(), 16);
  if (dims[0] < 0 || dims[1] < 0 ||
      bytes.size() != 16 + static_cast<size_t>(dims[0] * dims[1]) * sizeof(double))
    throw Error(ErrorCode::kParseError, "feature file size does not match its header");
  FeatureMatrix x(dims[0], dims[1]);
  size_t at = 16;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j, at += sizeof(double))
      std::memcpy(&x(i, j), bytes.data() + at, sizeof(double));
  return x;
}

}  // namespace eegl
