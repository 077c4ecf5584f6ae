#ifndef EEGL_PIPELINE_H_
#define EEGL_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "eegl/annotate.h"
#include "eegl/datasets.h"
#include "eegl/explainer.h"
#include "eegl/gcn.h"
#include "eegl/metrics.h"
#include "eegl/miner.h"

namespace eegl {

struct EeglConfig {
  int d = 10;
  int K = 1;
  double tau = 0.7;
  InitMode init;
  GcnHyper gcn;
  ExplainerHyper explainer;
  MinerOptions miner;
  int k_folds = 5;
  std::uint64_t seed = 1;
  // Per-round models, features and patterns go here; empty disables it.
  std::filesystem::path output_dir;
};

// kInvalidConfig unless d >= 1, K >= 1, 0 < tau <= 1, k_folds >= 2.
void validate_config(const EeglConfig& cfg);

// "init" is a name; adversarial patterns are not serialized and must be
// filled in by the caller.
nlohmann::json config_to_json(const EeglConfig& cfg);
EeglConfig config_from_json(const nlohmann::json& j);

struct RoundReport {
  int fold = 0;
  int round = 0;
  std::string split;  // train, test or all
  double weighted_f1 = 0.0;
  Confusion confusion;
  // Patterns whose indicator columns were the features of this round.
  std::vector<ScoredPattern> selected_patterns;
  std::map<std::string, double> timings;  // seconds spent producing this round
};

nlohmann::json report_to_json(const RoundReport& r);

// The EEGL loop for one fold: round 0 trains on the initial features, each of
// the K following rounds explains, mines, selects and retrains. Emits a
// train and a test report per round.
std::vector<RoundReport> run_eegl(const LabeledDataset& ds, const EeglConfig& cfg,
                                  const FoldPlan& folds, int fold_id);

// Round 0 only (for the LE / random / adversarial baselines). K is ignored.
std::vector<RoundReport> run_baseline(const LabeledDataset& ds, const EeglConfig& cfg,
                                      const FoldPlan& folds, int fold_id);

// Best accuracy (in [0, 1]) on `nodes` of any labeling constant on the WL
// classes of g under uniform initial colours: per-class majority.
double wl_ceiling_accuracy(const Graph& g, std::span<const LabeledNode> nodes);

// Builds a dataset from a JSON description:
//   {"kind": "ba-motif", "family": "m2p", "base_nodes", "copies", "m_ba", "noise_edges", "seed"}
//   {"kind": "g180"}
//   {"kind": "fullerene", "name": "c60_ih"} (pentagon-edge task)
//   {"kind": "file", "path": dir written by save_dataset}
LabeledDataset dataset_from_spec(const nlohmann::json& spec, const std::filesystem::path& data_dir);

struct SummaryRow {
  std::string setting;
  int round = 0;
  double mean_f1 = 0.0;
  double sd_f1 = 0.0;
};

struct ExperimentResult {
  std::vector<SummaryRow> summary;
  std::map<std::string, std::vector<std::vector<RoundReport>>> reports;  // setting -> fold -> reports
  std::map<std::string, double> timings;
};

// Experiment description:
//   {"dataset": {...}, "k_folds": 5, "seed": 1, "folds": [0, 1] (optional subset),
//    "defaults": {config fields},
//    "settings": [{"name": "R", "init": "random", "baseline": true}, {"name": "EEGL", "K": 2}, ...]}
// Each setting overrides the defaults. An "adversarial" init draws its
// patterns from the dataset's motif family ("family" in the dataset spec).
// Writes summary.csv, timings.csv, <setting>/fold_<f>.json and the
// per-round artifacts under <setting>/fold_<f>/round_<r>/. kSpecParseError
// on malformed specs.
ExperimentResult run_experiment(const nlohmann::json& spec, const std::filesystem::path& out_dir,
                                const std::filesystem::path& data_dir);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string timings_csv(const std::map<std::string, double>& timings);

}  // namespace eegl

#endif  // EEGL_PIPELINE_H_
