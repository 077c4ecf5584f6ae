#include "eegl/pipeline.h"

#include <chrono>
#include <cstdio>
#include <set>

#include "eegl/error.h"
#include "eegl/graph_io.h"
#include "eegl/parallel.h"
#include "eegl/wl.h"

namespace eegl {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix(splitmix(splitmix(base) ^ a) ^ b);
}

// Stream tags for derived seeds.
enum : std::uint64_t { kInitStream = 1, kGcnStream = 2, kExplainStream = 3 };

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Strips the "kCode: " prefix that Error adds, so rethrowing with more
// context does not repeat it.
std::string bare_message(const Error& e) {
  std::string s = e.what();
  const std::string prefix = std::string(error_code_name(e.code())) + ": ";
  return s.rfind(prefix, 0) == 0 ? s.substr(prefix.size()) : s;
}

RoundReport make_report(int fold, int round, const std::string& split,
                        std::span<const LabeledNode> nodes, std::span<const int> predicted,
                        int num_classes) {
  std::vector<int> truth, pred;
  for (const LabeledNode& ln : nodes) {
    truth.push_back(ln.label);
    pred.push_back(predicted[ln.node]);
  }
  RoundReport r;
  r.fold = fold;
  r.round = round;
  r.split = split;
  r.confusion = confusion_matrix(truth, pred, num_classes);
  r.weighted_f1 = weighted_f1(r.confusion);
  return r;
}

json pattern_json(const ScoredPattern& p) {
  return {{"code", p.code.hex()},
          {"class", p.class_label},
          {"f1", p.f1},
          {"support", p.support},
          {"graph", graph_to_json(p.pattern.graph(), p.pattern.root())}};
}

void persist_round(const std::filesystem::path& dir, const GcnModel& model, const FeatureMatrix& x,
                   const std::vector<ScoredPattern>& selected) {
  std::filesystem::create_directories(dir);
  save_model(model, (dir / "model.bin").string());
  write_features_binary(x, dir / "features.bin");
  json pats = json::array();
  for (std::size_t j = 0; j < selected.size(); ++j) {
    pats.push_back(pattern_json(selected[j]));
    DotStyle style;
    style.name = "pattern_" + std::to_string(j);
    style.root = selected[j].pattern.root();
    write_text_file(dir / ("pattern_" + std::to_string(j) + ".dot"),
                    graph_to_dot(selected[j].pattern.graph(), style));
  }
  write_text_file(dir / "patterns.json", pats.dump(1) + "\n");
}

void persist_mined(const std::filesystem::path& dir, const std::vector<FrequentPatternSet>& mined) {
  json j = json::array();
  for (std::size_t c = 0; c < mined.size(); ++c) {
    json cls{{"class", c}, {"m", mined[c].m}, {"patterns", json::array()}};
    for (const MinedPattern& p : mined[c].patterns)
      cls["patterns"].push_back({{"code", p.code.hex()}, {"support", p.support}});
    j.push_back(cls);
  }
  std::filesystem::create_directories(dir);
  write_text_file(dir / "mined.json", j.dump(1) + "\n");
}

std::vector<RoundReport> run_rounds(const LabeledDataset& ds, const EeglConfig& cfg,
                                    const FoldPlan& folds, int fold_id, int rounds) {
  if (fold_id < 0 || fold_id >= folds.k) throw Error(ErrorCode::kBadK, "fold id out of range");
  const Graph& g = ds.graph;
  const int num_classes = ds.num_classes;
  const std::vector<LabeledNode> train_nodes = folds.train(ds, fold_id);
  const std::vector<LabeledNode> test_nodes = folds.test(ds, fold_id);
  const std::uint64_t fold_seed = derive_seed(cfg.seed, fold_id);
  const std::filesystem::path fold_dir =
      cfg.output_dir.empty() ? std::filesystem::path() : cfg.output_dir / ("fold_" + std::to_string(fold_id));

  std::vector<RoundReport> reports;
  std::map<std::string, double> timings;
  std::vector<ScoredPattern> selected;
  auto t = Clock::now();
  FeatureMatrix x = init_features(g, cfg.d, cfg.init, ds.labels, num_classes,
                                  derive_seed(fold_seed, kInitStream));
  timings["init"] = seconds_since(t);

  for (int round = 0;; ++round) {
    try {
      GcnHyper hyper = cfg.gcn;
      hyper.seed = derive_seed(fold_seed, kGcnStream, round);
      t = Clock::now();
      GcnModel model = train(g, x, train_nodes, num_classes, hyper);
      std::vector<int> predicted = predict(model, x);
      timings["gcn"] = seconds_since(t);

      for (auto [split, nodes] : {std::pair{"train", &train_nodes}, std::pair{"test", &test_nodes}}) {
        RoundReport r = make_report(fold_id, round, split, *nodes, predicted, num_classes);
        r.selected_patterns = selected;
        r.timings = timings;
        reports.push_back(std::move(r));
      }
      const std::filesystem::path round_dir =
          fold_dir.empty() ? fold_dir : fold_dir / ("round_" + std::to_string(round));
      if (!round_dir.empty()) persist_round(round_dir, model, x, selected);
      if (round == rounds) break;
      timings.clear();

      ExplainerHyper eh = cfg.explainer;
      eh.seed = derive_seed(fold_seed, kExplainStream, round);
      t = Clock::now();
      std::vector<Explanation> explanations = explain_all(model, g, x, eh);
      timings["explainer"] = seconds_since(t);

      t = Clock::now();
      std::vector<ExplanationDB> dbs = group_by_predicted_class(explanations, predicted, num_classes);
      std::vector<FrequentPatternSet> mined(num_classes);
      for (int c = 0; c < num_classes; ++c) {
        if (dbs[c].m() == 0) {
          mined[c].tau = cfg.tau;
          mined[c].maximal_only = true;
          continue;
        }
        mined[c] = mine_maximal(dbs[c], cfg.tau, cfg.miner);
      }
      timings["miner"] = seconds_since(t);
      if (!round_dir.empty()) persist_mined(round_dir, mined);

      t = Clock::now();
      selected = top_patterns(score_patterns(mined, g, train_nodes), cfg.d);
      std::vector<RootedPattern> patterns;
      for (const ScoredPattern& p : selected) patterns.push_back(p.pattern);
      x = update_features(g, patterns, cfg.d);
      timings["annotate"] = seconds_since(t);
    } catch (const Error& e) {
      throw Error(e.code(), "fold " + std::to_string(fold_id) + " round " + std::to_string(round) +
                                ": " + bare_message(e));
    }
  }
  return reports;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

EeglConfig setting_config(const json& defaults, const json& setting) {
  json merged = defaults.is_object() ? defaults : json::object();
  for (auto it = setting.begin(); it != setting.end(); ++it) {
    if (it.key() == "gcn" || it.key() == "explainer") {
      json sub = merged.value(it.key(), json::object());
      sub.update(it.value());
      merged[it.key()] = sub;
    } else {
      merged[it.key()] = it.value();
    }
  }
  merged.erase("name");
  merged.erase("baseline");
  return config_from_json(merged);
}

}  // namespace

void validate_config(const EeglConfig& cfg) {
  if (cfg.d < 1) throw Error(ErrorCode::kInvalidConfig, "d must be >= 1");
  if (cfg.K < 1) throw Error(ErrorCode::kInvalidConfig, "K must be >= 1");
  if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "tau must be in (0, 1]");
  if (cfg.k_folds < 2) throw Error(ErrorCode::kInvalidConfig, "k_folds must be >= 2");
}

json config_to_json(const EeglConfig& cfg) {
  return {{"d", cfg.d},
          {"K", cfg.K},
          {"tau", cfg.tau},
          {"init", init_kind_name(cfg.init.kind)},
          {"gcn", hyper_to_json(cfg.gcn)},
          {"explainer", explainer_hyper_to_json(cfg.explainer)},
          {"max_pattern_nodes", cfg.miner.max_pattern_nodes},
          {"max_patterns", cfg.miner.max_patterns},
          {"k_folds", cfg.k_folds},
          {"seed", cfg.seed}};
}

EeglConfig config_from_json(const json& j) {
  static const std::set<std::string> known{"d", "K", "tau", "init", "gcn", "explainer",
                                           "max_pattern_nodes", "max_patterns", "k_folds", "seed",
                                           "output_dir"};
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw Error(ErrorCode::kInvalidConfig, "unknown config key " + it.key());
  try {
    EeglConfig cfg;
    cfg.d = j.value("d", cfg.d);
    cfg.K = j.value("K", cfg.K);
    cfg.tau = j.value("tau", cfg.tau);
    cfg.init.kind = init_kind_from_name(j.value("init", std::string("vanilla")));
    if (j.contains("gcn")) cfg.gcn = hyper_from_json(j["gcn"]);
    if (j.contains("explainer")) cfg.explainer = explainer_hyper_from_json(j["explainer"]);
    cfg.miner.max_pattern_nodes = j.value("max_pattern_nodes", cfg.miner.max_pattern_nodes);
    cfg.miner.max_patterns = j.value("max_patterns", cfg.miner.max_patterns);
    cfg.k_folds = j.value("k_folds", cfg.k_folds);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
}

json report_to_json(const RoundReport& r) {
  json pats = json::array();
  for (const ScoredPattern& p : r.selected_patterns)
    pats.push_back({{"code", p.code.hex()}, {"class", p.class_label}, {"f1", p.f1}});
  return {{"fold", r.fold},
          {"round", r.round},
          {"split", r.split},
          {"weighted_f1", r.weighted_f1},
          {"confusion", r.confusion},
          {"selected_patterns", pats},
          {"timings", r.timings}};
}

std::vector<RoundReport> run_eegl(const LabeledDataset& ds, const EeglConfig& cfg,
                                  const FoldPlan& folds, int fold_id) {
  validate_config(cfg);
  validate_dataset(ds);
  return run_rounds(ds, cfg, folds, fold_id, cfg.K);
}

std::vector<RoundReport> run_baseline(const LabeledDataset& ds, const EeglConfig& cfg,
                                      const FoldPlan& folds, int fold_id) {
  EeglConfig c = cfg;
  c.K = 1;
  validate_config(c);
  validate_dataset(ds);
  return run_rounds(ds, cfg, folds, fold_id, 0);
}

double wl_ceiling_accuracy(const Graph& g, std::span<const LabeledNode> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::kEmptyTrainSet, "no nodes to evaluate");
  NodePartition wl = wl_refine(g);
  std::map<int, std::map<int, long>> counts;  // WL class -> label -> count
  for (const LabeledNode& ln : nodes) ++counts[wl.class_of[ln.node]][ln.label];
  long best = 0;
  for (auto& [cls, by_label] : counts) {
    long m = 0;
    for (auto& [label, c] : by_label) m = std::max(m, c);
    best += m;
  }
  return static_cast<double>(best) / nodes.size();
}

LabeledDataset dataset_from_spec(const json& spec, const std::filesystem::path& data_dir) {
  try {
    const std::string kind = spec.at("kind");
    if (kind == "ba-motif") {
      BaMotifParams p;
      p.base_nodes = spec.value("base_nodes", p.base_nodes);
      p.copies = spec.value("copies", p.copies);
      p.m_ba = spec.value("m_ba", p.m_ba);
      p.noise_edges = spec.value("noise_edges", p.noise_edges);
      p.seed = spec.value("seed", p.seed);
      return gen_ba_motif(load_motif_family(data_dir, spec.at("family")), p);
    }
    if (kind == "g180") return build_g180();
    if (kind == "fullerene") {
      Graph g = build_fullerene(spec.at("name"));
      LabeledDataset ds = fullerene_task(g, FullereneMode::kPentagonEdge);
      ds.name = spec.at("name");
      return ds;
    }
    if (kind == "file") return load_dataset(spec.at("path").get<std::string>());
    throw Error(ErrorCode::kSpecParseError, "unknown dataset kind " + kind);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSpecParseError, std::string("dataset: ") + e.what());
  }
}

ExperimentResult run_experiment(const json& spec, const std::filesystem::path& out_dir,
                                const std::filesystem::path& data_dir) {
  if (!spec.is_object() || !spec.contains("dataset") || !spec.contains("settings") ||
      !spec["settings"].is_array() || spec["settings"].empty())
    throw Error(ErrorCode::kSpecParseError, "spec needs a dataset and a non-empty settings list");
  const json& dspec = spec["dataset"];
  LabeledDataset ds = dataset_from_spec(dspec, data_dir);
  const json defaults = spec.value("defaults", json::object());

  ExperimentResult result;
  std::set<std::string> names;
  for (const json& setting : spec["settings"]) {
    if (!setting.is_object() || !setting.contains("name"))
      throw Error(ErrorCode::kSpecParseError, "each setting needs a name");
    const std::string name = setting["name"];
    if (!names.insert(name).second) throw Error(ErrorCode::kSpecParseError, "duplicate setting " + name);

    EeglConfig cfg;
    try {
      json s = setting;
      if (spec.contains("seed") && !defaults.contains("seed")) s.emplace("seed", spec["seed"]);
      if (spec.contains("k_folds") && !defaults.contains("k_folds")) s.emplace("k_folds", spec["k_folds"]);
      cfg = setting_config(defaults, s);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSpecParseError, "setting " + name + ": " + bare_message(e));
    }
    const bool baseline = setting.value("baseline", false);
    if (cfg.init.kind == InitKind::kAdversarial) {
      std::string family = dspec.value("family", ds.provenance.value("family", std::string()));
      if (family.empty()) throw Error(ErrorCode::kSpecParseError, "adversarial init needs a motif family");
      cfg.init.patterns = adversarial_patterns(load_motif_family(data_dir, family), cfg.d);
    }
    cfg.output_dir = out_dir / name;

    FoldPlan plan = make_folds(ds, cfg.k_folds, cfg.seed);
    std::vector<int> fold_ids;
    if (spec.contains("folds")) {
      fold_ids = spec["folds"].get<std::vector<int>>();
    } else {
      for (int f = 0; f < cfg.k_folds; ++f) fold_ids.push_back(f);
    }
    std::vector<std::vector<RoundReport>> per_fold(fold_ids.size());
    parallel_for(static_cast<int>(fold_ids.size()), [&](int i) {
      per_fold[i] = baseline ? run_baseline(ds, cfg, plan, fold_ids[i])
                             : run_eegl(ds, cfg, plan, fold_ids[i]);
    });

    int max_round = 0;
    for (std::size_t i = 0; i < fold_ids.size(); ++i) {
      json j = json::array();
      for (const RoundReport& r : per_fold[i]) {
        j.push_back(report_to_json(r));
        max_round = std::max(max_round, r.round);
        if (r.split == "test")
          for (auto& [module, sec] : r.timings) result.timings[module] += sec;
      }
      write_text_file(out_dir / name / ("fold_" + std::to_string(fold_ids[i]) + ".json"),
                      j.dump(1) + "\n");
    }
    for (int round = 0; round <= max_round; ++round) {
      std::vector<double> f1;
      for (const auto& reports : per_fold)
        for (const RoundReport& r : reports)
          if (r.round == round && r.split == "test") f1.push_back(r.weighted_f1);
      MeanSd ms = mean_sd(f1);
      result.summary.push_back(SummaryRow{name, round, ms.mean, ms.sd});
    }
    result.reports[name] = std::move(per_fold);
  }
  write_text_file(out_dir / "summary.csv", summary_csv(result.summary));
  write_text_file(out_dir / "timings.csv", timings_csv(result.timings));
  return result;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "setting,round,mean_f1,sd_f1\n";
  for (const SummaryRow& r : rows)
    out += r.setting + "," + std::to_string(r.round) + "," + format_double(r.mean_f1) + "," +
           format_double(r.sd_f1) + "\n";
  return out;
}

std::string timings_csv(const std::map<std::string, double>& timings) {
  double total = 0;
  for (auto& [m, s] : timings) total += s;
  std::string out = "module,seconds,percent\n";
  for (auto& [m, s] : timings)
    out += m + "," + format_double(s) + "," + format_double(total > 0 ? 100.0 * s / total : 0.0) + "\n";
  return out;
}

}  // namespace eegl
