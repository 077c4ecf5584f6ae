#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "eegl/error.h"
#include "eegl/graph_io.h"
#include "eegl/pipeline.h"
#include "eegl/wl.h"

namespace eegl {
namespace {

namespace fs = std::filesystem;
const fs::path kData = EEGL_DATA_DIR;

// Weighted F1 straight from the definition, for cross-checking reports.
double reference_weighted_f1(const Confusion& c) {
  const std::size_t k = c.size();
  double total = 0, acc = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double tp = c[i][i], row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += c[i][j];
      col += c[j][i];
    }
    const double f1 = (row + col) > 0 ? 2 * tp / (row + col) : 0.0;
    acc += row * f1;
    total += row;
  }
  return 100.0 * acc / total;
}

LabeledDataset small_house() {
  BaMotifParams p;
  p.base_nodes = 60;
  p.copies = 12;
  p.seed = 3;
  return gen_ba_motif(load_motif_family(kData, "m1"), p);
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("eegl_pipeline_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(ConfigTest, ValidationAndJson) {
  EeglConfig cfg;
  EXPECT_NO_THROW(validate_config(cfg));
  for (auto bad : {+[](EeglConfig& c) { c.d = 0; }, +[](EeglConfig& c) { c.K = 0; },
                   +[](EeglConfig& c) { c.tau = 0.0; }, +[](EeglConfig& c) { c.tau = 1.5; },
                   +[](EeglConfig& c) { c.k_folds = 1; }}) {
    EeglConfig c;
    bad(c);
    EXPECT_THROW(validate_config(c), Error);
  }
  cfg.d = 7;
  cfg.tau = 0.4;
  cfg.init.kind = InitKind::kRandom;
  cfg.gcn.epochs = 33;
  cfg.explainer.keep_top_edges = 5;
  EeglConfig back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(back.d, 7);
  EXPECT_EQ(back.tau, 0.4);
  EXPECT_EQ(back.init.kind, InitKind::kRandom);
  EXPECT_EQ(back.gcn, cfg.gcn);
  EXPECT_EQ(back.explainer.keep_top_edges, 5);
  EXPECT_THROW(config_from_json(nlohmann::json{{"bogus", 1}}), Error);
}

TEST(WlCeilingTest, Examples) {
  Graph p3 = build_graph(3, {{0, 1}, {1, 2}});
  std::vector<LabeledNode> a{{0, 0}, {1, 1}, {2, 0}};
  EXPECT_DOUBLE_EQ(wl_ceiling_accuracy(p3, a), 1.0);
  std::vector<LabeledNode> b{{0, 0}, {1, 1}, {2, 1}};  // ends share a WL class
  EXPECT_DOUBLE_EQ(wl_ceiling_accuracy(p3, b), 2.0 / 3.0);
  EXPECT_THROW(wl_ceiling_accuracy(p3, {}), Error);
}

TEST(RunEeglTest, ReportsAreConsistent) {
  LabeledDataset ds = small_house();
  EeglConfig cfg;
  cfg.K = 2;
  cfg.gcn.epochs = 150;
  cfg.explainer.epochs = 60;
  cfg.output_dir = scratch("run");
  FoldPlan plan = make_folds(ds, cfg.k_folds, cfg.seed);
  std::vector<RoundReport> reports = run_eegl(ds, cfg, plan, 1);
  ASSERT_EQ(reports.size(), 2u * (cfg.K + 1));
  for (const RoundReport& r : reports) {
    EXPECT_EQ(r.fold, 1);
    EXPECT_NEAR(r.weighted_f1, reference_weighted_f1(r.confusion), 1e-9);
    std::vector<LabeledNode> nodes = r.split == "train" ? plan.train(ds, 1) : plan.test(ds, 1);
    std::vector<long> truth(ds.num_classes, 0);
    for (const LabeledNode& ln : nodes) ++truth[ln.label];
    for (int c = 0; c < ds.num_classes; ++c) {
      long row = 0;
      for (long x : r.confusion[c]) row += x;
      EXPECT_EQ(row, truth[c]);
    }
    if (r.round == 0) EXPECT_TRUE(r.selected_patterns.empty());
    EXPECT_LE(static_cast<int>(r.selected_patterns.size()), cfg.d);
    EXPECT_TRUE(r.timings.count("gcn"));
  }
  EXPECT_FALSE(reports[2].selected_patterns.empty());
  for (int round = 0; round <= cfg.K; ++round) {
    fs::path dir = cfg.output_dir / "fold_1" / ("round_" + std::to_string(round));
    EXPECT_TRUE(fs::exists(dir / "model.bin"));
    EXPECT_TRUE(fs::exists(dir / "features.bin"));
    EXPECT_TRUE(fs::exists(dir / "patterns.json"));
  }
  std::string dot = read_text_file(cfg.output_dir / "fold_1" / "round_1" / "pattern_0.dot");
  EXPECT_NE(dot.find("root=true"), std::string::npos);

  // A persisted round reloads to the same predictions.
  fs::path r1 = cfg.output_dir / "fold_1" / "round_1";
  GcnModel model = load_model((r1 / "model.bin").string(), ds.graph);
  std::vector<int> pred = predict(model, read_features_binary(r1 / "features.bin"));
  std::vector<int> truth, got;
  for (const LabeledNode& ln : plan.test(ds, 1)) {
    truth.push_back(ln.label);
    got.push_back(pred[ln.node]);
  }
  EXPECT_NEAR(weighted_f1(confusion_matrix(truth, got, ds.num_classes)), reports[3].weighted_f1, 1e-12);
  fs::remove_all(cfg.output_dir);
}

TEST(RunEeglTest, Deterministic) {
  LabeledDataset ds = small_house();
  EeglConfig cfg;
  cfg.gcn.epochs = 100;
  cfg.explainer.epochs = 40;
  FoldPlan plan = make_folds(ds, cfg.k_folds, cfg.seed);
  auto a = run_eegl(ds, cfg, plan, 0);
  auto b = run_eegl(ds, cfg, plan, 0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].confusion, b[i].confusion);
    ASSERT_EQ(a[i].selected_patterns.size(), b[i].selected_patterns.size());
    for (std::size_t j = 0; j < a[i].selected_patterns.size(); ++j)
      EXPECT_EQ(a[i].selected_patterns[j].code, b[i].selected_patterns[j].code);
  }
  EXPECT_THROW(run_eegl(ds, cfg, plan, 9), Error);
}

TEST(RunEeglTest, VanillaRoundZeroRespectsWlCeiling) {
  // Cycle with a pendant path: few WL classes, labels mix within them.
  std::vector<Edge> edges;
  for (int i = 0; i < 12; ++i) edges.push_back(make_edge(i, (i + 1) % 12));
  edges.push_back({0, 12});
  edges.push_back({12, 13});
  LabeledDataset ds;
  ds.graph = build_graph(14, edges);
  for (int v = 0; v < 14; ++v) ds.labels.push_back(v % 3 == 0 ? 1 : 0);
  ds.num_classes = 2;
  EeglConfig cfg;
  cfg.k_folds = 2;
  cfg.gcn.epochs = 300;
  FoldPlan plan = make_folds(ds, 2, 5);
  for (int f = 0; f < 2; ++f) {
    RoundReport test = run_baseline(ds, cfg, plan, f).back();
    ASSERT_EQ(test.split, "test");
    long correct = test.confusion[0][0] + test.confusion[1][1];
    long total = correct + test.confusion[0][1] + test.confusion[1][0];
    EXPECT_LE(static_cast<double>(correct) / total, wl_ceiling_accuracy(ds.graph, plan.test(ds, f)) + 1e-12);
  }

  // On a vertex-transitive graph the vanilla model predicts one class everywhere.
  LabeledDataset cyc;
  std::vector<Edge> ce;
  for (int i = 0; i < 12; ++i) ce.push_back(make_edge(i, (i + 1) % 12));
  cyc.graph = build_graph(12, ce);
  for (int v = 0; v < 12; ++v) cyc.labels.push_back(v % 2);
  cyc.num_classes = 2;
  RoundReport r = run_baseline(cyc, cfg, make_folds(cyc, 2, 1), 0).front();
  EXPECT_TRUE((r.confusion[0][0] + r.confusion[1][0] == 0) || (r.confusion[0][1] + r.confusion[1][1] == 0));
}

TEST(ExperimentTest, SummaryMatchesFoldFilesAndReruns) {
  nlohmann::json spec = {
      {"dataset", {{"kind", "ba-motif"}, {"family", "m1"}, {"base_nodes", 60}, {"copies", 12}, {"seed", 3}}},
      {"k_folds", 3},
      {"seed", 2},
      {"defaults", {{"d", 6}, {"gcn", {{"epochs", 300}}}}},
      {"settings", {{{"name", "LE"}, {"init", "le"}, {"baseline", true}}}}};
  fs::path out = scratch("exp");
  ExperimentResult r = run_experiment(spec, out, kData);
  ASSERT_EQ(r.summary.size(), 1u);
  EXPECT_GT(r.summary[0].mean_f1, 90.0);
  std::vector<double> f1;
  for (int f = 0; f < 3; ++f) {
    auto j = nlohmann::json::parse(read_text_file(out / "LE" / ("fold_" + std::to_string(f) + ".json")));
    for (const auto& rep : j)
      if (rep["split"] == "test") f1.push_back(rep["weighted_f1"]);
  }
  ASSERT_EQ(f1.size(), 3u);
  double mean = (f1[0] + f1[1] + f1[2]) / 3, var = 0;
  for (double x : f1) var += (x - mean) * (x - mean) / 3;
  EXPECT_NEAR(r.summary[0].mean_f1, mean, 1e-9);
  EXPECT_NEAR(r.summary[0].sd_f1, std::sqrt(var), 1e-9);
  const std::string csv = read_text_file(out / "summary.csv");
  EXPECT_EQ(csv.rfind("setting,round,mean_f1,sd_f1\nLE,0,", 0), 0u);
  EXPECT_EQ(read_text_file(out / "timings.csv").rfind("module,seconds,percent\n", 0), 0u);

  fs::path out2 = scratch("exp2");
  run_experiment(spec, out2, kData);
  EXPECT_EQ(read_text_file(out2 / "summary.csv"), csv);
  fs::remove_all(out);
  fs::remove_all(out2);
}

TEST(ExperimentTest, AdversarialBaselineRuns) {
  nlohmann::json spec = {
      {"dataset", {{"kind", "ba-motif"}, {"family", "m1"}, {"base_nodes", 60}, {"copies", 12}}},
      {"k_folds", 2},
      {"defaults", {{"d", 4}, {"gcn", {{"epochs", 50}}}}},
      {"settings", {{{"name", "A"}, {"init", "adversarial"}, {"baseline", true}}}}};
  fs::path out = scratch("adv");
  ExperimentResult r = run_experiment(spec, out, kData);
  EXPECT_EQ(r.summary.size(), 1u);
  fs::remove_all(out);
}

TEST(ExperimentTest, SpecErrors) {
  fs::path out = scratch("bad");
  using json = nlohmann::json;
  json ds = {{"kind", "ba-motif"}, {"family", "m1"}, {"base_nodes", 30}, {"copies", 4}};
  auto expect_spec_error = [&](const json& spec) {
    try {
      run_experiment(spec, out, kData);
      ADD_FAILURE() << spec.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSpecParseError) << e.what();
    }
  };
  expect_spec_error(json{{"dataset", ds}});
  expect_spec_error(json{{"dataset", {{"kind", "nope"}}}, {"settings", {{{"name", "x"}}}}});
  expect_spec_error(json{{"dataset", ds}, {"settings", {{{"name", "x"}}, {{"name", "x"}}}}});
  expect_spec_error(json{{"dataset", ds}, {"settings", {{{"init", "le"}}}}});
  expect_spec_error(json{{"dataset", ds}, {"settings", {{{"name", "x"}, {"tau", 2.0}, {"foo", 1}}}}});
  expect_spec_error(json{{"dataset", {{"kind", "fullerene"}, {"name", "c60_ih"}}},
                         {"settings", {{{"name", "x"}, {"init", "adversarial"}}}}});
  fs::remove_all(out);
}

TEST(CsvTest, Formats) {
  EXPECT_EQ(summary_csv({{"R", 1, 99.5, 0.25}}), "setting,round,mean_f1,sd_f1\nR,1,99.5000,0.2500\n");
  EXPECT_EQ(timings_csv({{"gcn", 3.0}, {"miner", 1.0}}),
            "module,seconds,percent\ngcn,3.0000,75.0000\nminer,1.0000,25.0000\n");
}

}  // namespace
}  // namespace eegl
