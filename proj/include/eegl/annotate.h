#ifndef EEGL_ANNOTATE_H_
#define EEGL_ANNOTATE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "eegl/canonical.h"
#include "eegl/gcn.h"
#include "eegl/graph.h"
#include "eegl/miner.h"

namespace eegl {

struct ScoredPattern {
  RootedPattern pattern;
  CanonicalCode code;
  int class_label = 0;
  double f1 = 0.0;  // in [0, 1], training nodes only
  int support = 0;
};

// Per-node rooted match indicator of p in g.
std::vector<char> match_column(const RootedPattern& p, const Graph& g);

// Binary F1 of "v matches p" as a predictor of class c over the labeled
// nodes in train.
double pattern_f1(const RootedPattern& p, int c, const Graph& g, std::span<const LabeledNode> train);
double pattern_f1(std::span<const char> column, int c, std::span<const LabeledNode> train);

// Scores every mined pattern of each class (index = class id).
std::vector<std::vector<ScoredPattern>> score_patterns(
    const std::vector<FrequentPatternSet>& per_class, const Graph& g,
    std::span<const LabeledNode> train);

// Round-robin over ascending class ids, each class contributing its best
// remaining pattern (F1 desc, then fewer edges, then code). A pattern whose
// code was already taken by another class is skipped. Stops at d patterns.
std::vector<ScoredPattern> top_patterns(const std::vector<std::vector<ScoredPattern>>& per_class,
                                        int d);

// n x d matrix; column j indicates rooted matches of selected[j], the
// remaining columns are 0. kTooManyPatterns if selected.size() > d.
FeatureMatrix update_features(const Graph& g, std::span<const RootedPattern> selected, int d);

enum class InitKind { kVanilla, kRandom, kLabelEncoded, kAdversarial };

struct InitMode {
  InitKind kind = InitKind::kVanilla;
  std::vector<RootedPattern> patterns;  // adversarial only
};

std::string init_kind_name(InitKind kind);
InitKind init_kind_from_name(const std::string& name);

// vanilla: ones; random: uniform [0,1); label_encoded: one-hot of labels in
// the first num_classes columns; adversarial: pattern indicator columns.
FeatureMatrix init_features(const Graph& g, int d, const InitMode& mode,
                            std::span<const int> labels, int num_classes, std::uint64_t seed);

// CSV with header f0..f{d-1}; values printed round-trip exact.
std::string features_to_csv(const FeatureMatrix& x);
FeatureMatrix features_from_csv(const std::string& text);
// Binary sidecar: int64 rows, int64 cols, then row-major doubles.
void write_features_binary(const FeatureMatrix& x, const std::filesystem::path& path);
FeatureMatrix read_features_binary(const std::filesystem::path& path);

}  // namespace eegl

#endif  // EEGL_ANNOTATE_H_
