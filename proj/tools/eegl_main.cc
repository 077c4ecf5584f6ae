// eegl command-line front end.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "eegl/annotate.h"
#include "eegl/datasets.h"
#include "eegl/error.h"
#include "eegl/explainer.h"
#include "eegl/gcn.h"
#include "eegl/graph_io.h"
#include "eegl/miner.h"
#include "eegl/parallel.h"
#include "eegl/pipeline.h"
#include "eegl/subiso.h"
#include "eegl/wl.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

#ifdef EEGL_DATA_DIR
const char* kDefaultDataDir = EEGL_DATA_DIR;
#else
const char* kDefaultDataDir = "data";
#endif

// A dataset argument is either a directory written by gen-dataset or a JSON
// dataset spec (see dataset_from_spec).
json dataset_spec_arg(const std::string& arg) {
  if (fs::is_directory(arg)) return {{"kind", "file"}, {"path", fs::absolute(arg).string()}};
  return json::parse(eegl::read_text_file(arg));
}

eegl::LabeledDataset load_dataset_arg(const std::string& arg, const std::string& data_dir) {
  return eegl::dataset_from_spec(dataset_spec_arg(arg), data_dir);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    eegl::write_text_file(out, text);
}

void print_summary(const eegl::ExperimentResult& r) { std::cout << eegl::summary_csv(r.summary); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explanation-enhanced graph learning toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  int threads = 0;
  std::string data_dir = kDefaultDataDir;
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--threads", threads, "Worker threads (0 = hardware)");
  app.add_option("--data-dir", data_dir, "Directory holding motifs/");

  // gen-dataset
  auto* gen = app.add_subcommand("gen-dataset", "Generate a dataset");
  gen->require_subcommand(1);
  std::string out;
  eegl::BaMotifParams ba;
  std::string family = "m1";
  auto* gen_ba = gen->add_subcommand("ba-motif", "BA base graph with planted motifs");
  gen_ba->add_option("--family", family, "Motif family (m1, m1p, m2, m2p)");
  gen_ba->add_option("--base-nodes", ba.base_nodes);
  gen_ba->add_option("--copies", ba.copies);
  gen_ba->add_option("--m-ba", ba.m_ba);
  gen_ba->add_option("--noise-edges", ba.noise_edges, "-1 = 1% of the edges");
  gen_ba->add_option("--out", out, "Output directory")->required();
  auto* gen_g180 = gen->add_subcommand("g180", "Cycle of 12 with four rotating motifs");
  gen_g180->add_option("--out", out, "Output directory")->required();
  std::string fullerene = "c60_ih", labels_file, cage_out;
  auto* gen_full = gen->add_subcommand("fullerene", "Edge classification on a fullerene line graph");
  gen_full->add_option("--name", fullerene, "One of c24_d6d, c60_ih, c70_d5h, c80_d5d");
  gen_full->add_option("--labels", labels_file, "Per-edge labels, one per line (default: pentagon task)");
  gen_full->add_option("--cage-out", cage_out, "Also write the cage graph here");
  gen_full->add_option("--out", out, "Output directory")->required();

  // run / experiment / baseline
  std::string config_file, dataset_arg, spec_file, mode = "le";
  std::vector<int> fold_subset;
  auto* run = app.add_subcommand("run", "Run EEGL on every fold");
  run->add_option("--config", config_file, "EEGL config JSON")->required();
  run->add_option("--dataset", dataset_arg, "Dataset directory or dataset spec JSON")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--folds", fold_subset, "Only these folds");
  auto* experiment = app.add_subcommand("experiment", "Run an experiment spec");
  experiment->add_option("--spec", spec_file, "Experiment spec JSON")->required();
  experiment->add_option("--out", out, "Output directory")->required();
  auto* baseline = app.add_subcommand("baseline", "Round-0 baseline on every fold");
  baseline->add_option("--mode", mode, "le | random | adversarial | vanilla")
      ->check(CLI::IsMember({"le", "random", "adversarial", "vanilla"}));
  baseline->add_option("--config", config_file, "Optional config JSON");
  baseline->add_option("--dataset", dataset_arg, "Dataset directory or dataset spec JSON")->required();
  baseline->add_option("--out", out, "Output directory")->required();
  baseline->add_option("--folds", fold_subset, "Only these folds");

  // graph tools
  std::string graph_file, pattern_file;
  std::optional<int> root, target_root;
  auto* wl = app.add_subcommand("wl", "1-WL stable partition");
  wl->add_option("--graph", graph_file)->required();
  wl->add_option("--out", out);
  auto* orb = app.add_subcommand("orbits", "Automorphism orbits");
  orb->add_option("--graph", graph_file)->required();
  orb->add_option("--out", out);
  double tau = 0.7;
  bool maximal = false;
  std::string db_file;
  auto* mine = app.add_subcommand("mine", "Frequent rooted patterns of a database");
  mine->add_option("--db", db_file, "JSON list of rooted graphs")->required();
  mine->add_option("--tau", tau);
  mine->add_flag("--maximal", maximal);
  mine->add_option("--out", out);
  auto* match = app.add_subcommand("match", "Rooted subgraph isomorphism");
  match->add_option("--pattern", pattern_file, "Pattern graph (root from file or --root)")->required();
  match->add_option("--graph", graph_file, "Target graph")->required();
  match->add_option("--root", root, "Pattern root");
  match->add_option("--target-root", target_root, "Only test this target node");

  // model tools
  std::string model_file, features_file, init = "vanilla";
  int dim = 10, k_folds = 5, fold = 0, node = -1;
  eegl::GcnHyper hyper;
  auto* tr = app.add_subcommand("train", "Train a GCN on one fold");
  tr->add_option("--dataset", dataset_arg)->required();
  tr->add_option("--features", features_file, "Feature matrix (binary); default: --init");
  tr->add_option("--init", init, "vanilla | random | le");
  tr->add_option("--d", dim);
  tr->add_option("--k-folds", k_folds);
  tr->add_option("--fold", fold);
  tr->add_option("--epochs", hyper.epochs);
  tr->add_option("--lr", hyper.learning_rate);
  tr->add_option("--out", model_file, "Model checkpoint")->required();
  auto* pr = app.add_subcommand("predict", "Predict every node");
  pr->add_option("--model", model_file)->required();
  pr->add_option("--dataset", dataset_arg)->required();
  pr->add_option("--features", features_file)->required();
  pr->add_option("--out", out);
  auto* ex = app.add_subcommand("explain", "Explain one node's prediction");
  ex->add_option("--model", model_file)->required();
  ex->add_option("--dataset", dataset_arg)->required();
  ex->add_option("--features", features_file)->required();
  ex->add_option("--node", node)->required();
  ex->add_option("--out", out, "DOT output");

  CLI11_PARSE(app, argc, argv);
  eegl::set_num_threads(threads);

  try {
    if (gen->parsed()) {
      eegl::LabeledDataset ds;
      if (gen_ba->parsed()) {
        ba.seed = seed;
        ds = eegl::gen_ba_motif(eegl::load_motif_family(data_dir, family), ba);
        ds.provenance["family"] = family;
      } else if (gen_g180->parsed()) {
        ds = eegl::build_g180();
      } else {
        eegl::Graph cage = eegl::build_fullerene(fullerene);
        if (!cage_out.empty()) eegl::write_graph_file(cage_out, cage);
        if (labels_file.empty()) {
          ds = eegl::fullerene_task(cage, eegl::FullereneMode::kPentagonEdge);
        } else {
          std::vector<int> labels;
          std::istringstream in(eegl::read_text_file(labels_file));
          for (int l; in >> l;) labels.push_back(l);
          ds = eegl::fullerene_task(cage, eegl::FullereneMode::kExplicitLabels, labels);
        }
        ds.name = fullerene;
      }
      eegl::save_dataset(ds, out);
      std::cout << ds.name << ": " << ds.graph.num_nodes() << " nodes, " << ds.graph.num_edges()
                << " edges, " << ds.num_classes << " classes\n";
    } else if (run->parsed() || baseline->parsed()) {
      json setting = config_file.empty() ? json::object() : json::parse(eegl::read_text_file(config_file));
      setting["name"] = run->parsed() ? "eegl" : mode;
      if (!setting.contains("seed")) setting["seed"] = seed;
      if (baseline->parsed()) {
        setting["baseline"] = true;
        setting["init"] = mode;
      }
      json spec{{"dataset", dataset_spec_arg(dataset_arg)}, {"settings", {setting}}};
      if (!fold_subset.empty()) spec["folds"] = fold_subset;
      print_summary(eegl::run_experiment(spec, out, data_dir));
    } else if (experiment->parsed()) {
      json spec = json::parse(eegl::read_text_file(spec_file));
      if (!spec.contains("seed")) spec["seed"] = seed;
      print_summary(eegl::run_experiment(spec, out, data_dir));
    } else if (wl->parsed() || orb->parsed()) {
      eegl::Graph g = eegl::read_graph_file(graph_file).graph;
      eegl::NodePartition p = wl->parsed() ? eegl::wl_refine(g) : eegl::orbits(g);
      emit(eegl::partition_to_json(p).dump() + "\n", out);
    } else if (mine->parsed()) {
      eegl::ExplanationDB db;
      for (const json& entry : json::parse(eegl::read_text_file(db_file))) {
        if (entry.is_null()) {
          db.graphs.push_back(std::nullopt);
          continue;
        }
        eegl::GraphFile gf = eegl::graph_from_json(entry);
        if (!gf.root) throw eegl::Error(eegl::ErrorCode::kMissingRoot, "database entry without root");
        db.graphs.emplace_back(eegl::RootedGraph(gf.graph, *gf.root));
      }
      eegl::FrequentPatternSet fs =
          maximal ? eegl::mine_maximal(db, tau) : eegl::mine_frequent(db, tau);
      json j = json::array();
      for (const eegl::MinedPattern& p : fs.patterns)
        j.push_back({{"code", p.code.hex()},
                     {"support", p.support},
                     {"graph", eegl::graph_to_json(p.pattern.graph(), p.pattern.root())}});
      emit(j.dump(1) + "\n", out);
    } else if (match->parsed()) {
      eegl::GraphFile pf = eegl::read_graph_file(pattern_file);
      const int r = root ? *root : pf.root.value_or(0);
      eegl::RootedPattern p(pf.graph, r);
      eegl::Graph g = eegl::read_graph_file(graph_file).graph;
      if (target_root) {
        std::cout << (eegl::rooted_sub_iso(p, g, *target_root) ? "true" : "false") << "\n";
      } else {
        std::vector<char> col = eegl::match_column(p, g);
        for (char c : col) std::cout << int(c) << "\n";
      }
    } else if (tr->parsed()) {
      eegl::LabeledDataset ds = load_dataset_arg(dataset_arg, data_dir);
      eegl::FeatureMatrix x =
          features_file.empty()
              ? eegl::init_features(ds.graph, dim, {eegl::init_kind_from_name(init), {}}, ds.labels,
                                    ds.num_classes, seed)
              : eegl::read_features_binary(features_file);
      eegl::FoldPlan plan = eegl::make_folds(ds, k_folds, seed);
      hyper.seed = seed;
      eegl::GcnModel model = eegl::train(ds.graph, x, plan.train(ds, fold), ds.num_classes, hyper);
      eegl::save_model(model, model_file);
      if (features_file.empty())
        eegl::write_features_binary(x, fs::path(model_file).replace_extension(".features.bin"));
      auto pred = eegl::predict(model, x);
      auto test = plan.test(ds, fold);
      std::vector<int> truth, p;
      for (auto& ln : test) {
        truth.push_back(ln.label);
        p.push_back(pred[ln.node]);
      }
      std::cout << "test weighted F1 "
                << eegl::weighted_f1(eegl::confusion_matrix(truth, p, ds.num_classes)) << "\n";
    } else if (pr->parsed() || ex->parsed()) {
      eegl::LabeledDataset ds = load_dataset_arg(dataset_arg, data_dir);
      eegl::GcnModel model = eegl::load_model(model_file, ds.graph);
      eegl::FeatureMatrix x = eegl::read_features_binary(features_file);
      if (pr->parsed()) {
        std::string text;
        for (int c : eegl::predict(model, x)) text += std::to_string(c) + "\n";
        emit(text, out);
      } else {
        eegl::ExplainerHyper eh;
        eh.seed = seed;
        eegl::Explanation e = eegl::explain_node(model, ds.graph, x, node, eh);
        json edges = json::array();
        for (std::size_t i = 0; i < e.host_edges.size(); ++i)
          edges.push_back({{"u", e.host_edges[i].u}, {"v", e.host_edges[i].v}, {"mask", e.mask_values[i]}});
        std::cout << json{{"node", node}, {"predicted_class", e.predicted_class}, {"edges", edges}}.dump(1)
                  << "\n";
        if (!out.empty() && e.subgraph) {
          eegl::DotStyle style;
          style.name = "explanation_" + std::to_string(node);
          style.root = e.subgraph->root();
          eegl::write_text_file(out, eegl::graph_to_dot(e.subgraph->graph(), style));
        }
      }
    }
  } catch (const eegl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
