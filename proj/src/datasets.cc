#include "eegl/datasets.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include "eegl/canonical.h"
#include "eegl/error.h"
#include "eegl/graph_io.h"
#include "eegl/random.h"
#include "eegl/subiso.h"
#include "eegl/wl.h"

namespace eegl {
namespace {

using json = nlohmann::json;

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

bool in_some_pentagon(const Graph& g, NodeId u, NodeId v) {
  // Simple path v -> a -> b -> c -> u of length 4 avoiding u and v inside.
  for (NodeId a : g.neighbors(v)) {
    if (a == u) continue;
    for (NodeId b : g.neighbors(a)) {
      if (b == u || b == v) continue;
      for (NodeId c : g.neighbors(b)) {
        if (c == u || c == v || c == a) continue;
        if (g.has_edge(c, u)) return true;
      }
    }
  }
  return false;
}

}  // namespace

void validate_dataset(const LabeledDataset& ds) {
  if (static_cast<int>(ds.labels.size()) != ds.graph.num_nodes())
    throw Error(ErrorCode::kDimensionMismatch, "one label per node required");
  for (int l : ds.labels)
    if (l < 0 || l >= ds.num_classes) throw Error(ErrorCode::kLabelOutOfRange, "label out of range");
  if (!ds.motif_membership.empty() &&
      static_cast<int>(ds.motif_membership.size()) != ds.graph.num_nodes())
    throw Error(ErrorCode::kDimensionMismatch, "motif membership length differs from node count");
}

Graph gen_ba(int n, int m_ba, std::uint64_t seed) {
  if (m_ba < 1 || n <= m_ba) throw Error(ErrorCode::kBadParams, "need n > m_ba >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::vector<NodeId> repeated;  // each node once per incident edge
  for (NodeId leaf = 1; leaf <= m_ba; ++leaf) {
    edges.push_back(Edge{0, leaf});
    repeated.push_back(0);
    repeated.push_back(leaf);
  }
  for (NodeId source = m_ba + 1; source < n; ++source) {
    std::vector<NodeId> targets;
    while (static_cast<int>(targets.size()) < m_ba) {
      NodeId t = repeated[uniform_index(rng, repeated.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    std::sort(targets.begin(), targets.end());
    for (NodeId t : targets) {
      edges.push_back(Edge{t, source});
      repeated.push_back(t);
      repeated.push_back(source);
    }
  }
  return build_graph(n, edges);
}

MotifFamily motif_family_from_json(const json& j) {
  try {
    MotifFamily f;
    f.name = j.at("name");
    f.base_attach_label = j.value("base_attach_label", 0);
    for (const json& m : j.at("motifs")) {
      MotifSpec spec;
      spec.name = m.at("name");
      const int n = m.at("n");
      std::vector<Edge> edges;
      for (const json& e : m.at("edges")) edges.push_back(Edge{e.at(0), e.at(1)});
      spec.graph = build_graph(n, edges);
      spec.labels = m.at("labels").get<std::vector<int>>();
      spec.attach = m.at("attach");
      if (static_cast<int>(spec.labels.size()) != n)
        throw Error(ErrorCode::kParseError, "motif " + spec.name + ": one label per node required");
      if (spec.attach < 0 || spec.attach >= n)
        throw Error(ErrorCode::kParseError, "motif " + spec.name + ": attach node out of range");
      if (!is_connected(spec.graph))
        throw Error(ErrorCode::kParseError, "motif " + spec.name + " is disconnected");
      f.motifs.push_back(std::move(spec));
    }
    if (f.motifs.empty()) throw Error(ErrorCode::kParseError, "motif family has no motifs");
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("motif family: ") + e.what());
  }
}

json motif_family_to_json(const MotifFamily& f) {
  json j{{"name", f.name}, {"base_attach_label", f.base_attach_label}, {"motifs", json::array()}};
  for (const MotifSpec& m : f.motifs) {
    json edges = json::array();
    for (const Edge& e : m.graph.edges()) edges.push_back({e.u, e.v});
    j["motifs"].push_back({{"name", m.name},
                           {"n", m.graph.num_nodes()},
                           {"edges", edges},
                           {"labels", m.labels},
                           {"attach", m.attach}});
  }
  return j;
}

MotifFamily load_motif_family(const std::filesystem::path& data_dir, const std::string& name) {
  const auto path = data_dir / "motifs" / (name + ".json");
  try {
    return motif_family_from_json(json::parse(read_text_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

int default_noise_edges(int num_edges) {
  return static_cast<int>(std::ceil(0.01 * num_edges - 1e-9));
}

LabeledDataset plant_motifs(const Graph& base, const MotifFamily& family, int copies,
                            int noise_edges, std::uint64_t seed) {
  if (copies < 0 || noise_edges < 0) throw Error(ErrorCode::kBadParams, "negative count");
  if (copies > base.num_nodes())
    throw Error(ErrorCode::kNotEnoughBaseNodes, "more motif copies than base nodes");
  std::mt19937_64 rng(seed);
  std::vector<NodeId> base_nodes(base.num_nodes());
  for (NodeId v = 0; v < base.num_nodes(); ++v) base_nodes[v] = v;
  eegl::shuffle(base_nodes.begin(), base_nodes.end(), rng);

  LabeledDataset ds;
  ds.name = family.name;
  std::vector<Edge> edges = base.edges();
  ds.labels.assign(base.num_nodes(), 0);
  ds.motif_membership.assign(base.num_nodes(), -1);
  int max_label = 0;
  for (const MotifSpec& m : family.motifs)
    for (int l : m.labels) max_label = std::max(max_label, l);
  max_label = std::max(max_label, family.base_attach_label);

  json chosen = json::array();
  int n = base.num_nodes();
  for (int c = 0; c < copies; ++c) {
    const int which = static_cast<int>(uniform_index(rng, family.motifs.size()));
    const MotifSpec& m = family.motifs[which];
    const NodeId anchor = base_nodes[c];
    for (const Edge& e : m.graph.edges()) edges.push_back(Edge{n + e.u, n + e.v});
    edges.push_back(Edge{anchor, n + m.attach});
    for (int i = 0; i < m.graph.num_nodes(); ++i) {
      ds.labels.push_back(m.labels[i]);
      ds.motif_membership.push_back(c);
    }
    if (family.base_attach_label) ds.labels[anchor] = family.base_attach_label;
    chosen.push_back({{"motif", which}, {"anchor", anchor}, {"first_node", n}});
    n += m.graph.num_nodes();
  }

  std::unordered_set<std::uint64_t> present;
  for (const Edge& e : edges) present.insert(pair_key(e.u, e.v));
  const long max_edges = static_cast<long>(n) * (n - 1) / 2;
  if (static_cast<long>(edges.size()) + noise_edges > max_edges)
    throw Error(ErrorCode::kBadParams, "too many noise edges");
  json noise = json::array();
  while (static_cast<int>(noise.size()) < noise_edges) {
    const NodeId a = static_cast<NodeId>(uniform_index(rng, n));
    const NodeId b = static_cast<NodeId>(uniform_index(rng, n));
    if (a == b || !present.insert(pair_key(a, b)).second) continue;
    edges.push_back(make_edge(a, b));
    noise.push_back({std::min(a, b), std::max(a, b)});
  }
  ds.graph = build_graph(n, edges);
  ds.num_classes = max_label + 1;
  ds.provenance = {{"generator", "plant_motifs"},
                   {"family", family.name},
                   {"copies", copies},
                   {"noise_edges", noise_edges},
                   {"seed", seed},
                   {"placements", chosen},
                   {"noise", noise}};
  return ds;
}

LabeledDataset gen_ba_motif(const MotifFamily& family, const BaMotifParams& p) {
  Graph base = gen_ba(p.base_nodes, p.m_ba, p.seed);
  int noise = p.noise_edges;
  if (noise < 0) {
    int clean_edges = base.num_edges() + p.copies;  // bridges
    // Expected motif edges: use the family mean so the count does not depend
    // on which motifs get drawn.
    double motif_edges = 0;
    for (const MotifSpec& m : family.motifs) motif_edges += m.graph.num_edges();
    clean_edges += static_cast<int>(std::lround(p.copies * motif_edges / family.motifs.size()));
    noise = default_noise_edges(clean_edges);
  }
  LabeledDataset ds = plant_motifs(base, family, p.copies, noise, p.seed + 1);
  ds.name = "ba_" + family.name;
  ds.provenance["base"] = {{"generator", "gen_ba"}, {"n", p.base_nodes}, {"m_ba", p.m_ba},
                           {"seed", p.seed}};
  return ds;
}

RootedGraph g180_motif(int index) {
  if (index < 0 || index > 3) throw Error(ErrorCode::kBadParams, "G180 motif index is 0..3");
  const bool cousin = index & 2, cross = index & 1;
  enum { kBottom, kU, kX, kY, kA, kB, kC, kD, kP, kQ, kE, kF, kG, kH, kZ };
  std::vector<Edge> edges{{kBottom, kU}, {kU, kX}, {kU, kY}, {kX, kA}, {kX, kB},
                          {kY, kC},      {kY, kD}, {kP, kE}, {kP, kF}, {kQ, kG},
                          {kQ, kH},      {kE, kZ}, {kF, kZ}, {kG, kZ}, {kH, kZ}};
  if (cousin) {
    edges.push_back({kA, kC});
    edges.push_back({kB, kD});
  } else {
    edges.push_back({kA, kB});
    edges.push_back({kC, kD});
  }
  if (cross) {
    for (Edge e : {Edge{kA, kP}, Edge{kC, kP}, Edge{kB, kQ}, Edge{kD, kQ}}) edges.push_back(e);
  } else {
    for (Edge e : {Edge{kA, kP}, Edge{kB, kP}, Edge{kC, kQ}, Edge{kD, kQ}}) edges.push_back(e);
  }
  for (Edge& e : edges) e = make_edge(e.u, e.v);
  return RootedGraph(build_graph(15, edges), kBottom);
}

LabeledDataset build_g180() {
  constexpr int kCycle = 12;
  std::vector<Edge> edges;
  for (int i = 0; i < kCycle; ++i) edges.push_back(make_edge(i, (i + 1) % kCycle));
  int n = kCycle;
  std::vector<int> membership(kCycle, -1);
  for (int i = 0; i < kCycle; ++i) {
    RootedGraph m = g180_motif(i % 4);
    // Motif node 0 (the bottom) is identified with cycle node i.
    auto host = [&](NodeId v) { return v == 0 ? i : n + v - 1; };
    for (const Edge& e : m.graph().edges()) edges.push_back(make_edge(host(e.u), host(e.v)));
    for (int v = 1; v < m.graph().num_nodes(); ++v) membership.push_back(i);
    n += m.graph().num_nodes() - 1;
  }
  LabeledDataset ds;
  ds.name = "g180";
  ds.graph = build_graph(n, edges);
  ds.motif_membership = membership;

  std::vector<NodeId> cycle(kCycle);
  for (int i = 0; i < kCycle; ++i) cycle[i] = i;
  NodePartition wl = wl_refine(ds.graph);
  NodePartition dist = distance_classes(ds.graph, cycle);
  if (wl.num_classes != 7 || !same_blocks(wl, dist))
    throw Error(ErrorCode::kCertificateFailure, "G180: WL classes are not the 7 distance classes");
  NodePartition orb = orbits(ds.graph);
  if (orb.num_classes != 28)
    throw Error(ErrorCode::kCertificateFailure,
                "G180: expected 28 orbits, got " + std::to_string(orb.num_classes));
  std::set<CanonicalCode> codes;
  for (int k = 0; k < 4; ++k) {
    RootedGraph m = g180_motif(k);
    codes.insert(canonical_code(m.graph(), m.root()));
  }
  if (codes.size() != 4)
    throw Error(ErrorCode::kCertificateFailure, "G180: two motifs are rooted-isomorphic");
  ds.labels = orb.class_of;
  ds.num_classes = orb.num_classes;
  ds.provenance = {{"generator", "build_g180"},
                   {"wl_classes", wl.num_classes},
                   {"orbits", orb.num_classes}};
  return ds;
}

std::vector<char> pentagon_edges(const Graph& g) {
  std::vector<char> out(g.num_edges());
  for (int i = 0; i < g.num_edges(); ++i) out[i] = in_some_pentagon(g, g.edges()[i].u, g.edges()[i].v);
  return out;
}

LabeledDataset fullerene_task(const Graph& g, FullereneMode mode, std::span<const int> explicit_labels) {
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (g.degree(v) != 3) throw Error(ErrorCode::kNotCubic, "fullerene graph must be 3-regular");
  if (!is_connected(g)) throw Error(ErrorCode::kNotCubic, "fullerene graph must be connected");
  LabeledDataset ds;
  ds.name = "fullerene";
  ds.graph = line_graph(g).graph;
  if (mode == FullereneMode::kPentagonEdge) {
    std::vector<char> flags = pentagon_edges(g);
    ds.labels.assign(flags.begin(), flags.end());
    ds.num_classes = 2;
    ds.provenance = {{"generator", "fullerene_task"}, {"mode", "pentagon_edge"}};
  } else {
    if (static_cast<int>(explicit_labels.size()) != g.num_edges())
      throw Error(ErrorCode::kLabelCountMismatch, "need one label per fullerene edge");
    ds.labels.assign(explicit_labels.begin(), explicit_labels.end());
    ds.num_classes = 0;
    for (int l : ds.labels) {
      if (l < 0) throw Error(ErrorCode::kLabelOutOfRange, "negative edge label");
      ds.num_classes = std::max(ds.num_classes, l + 1);
    }
    ds.provenance = {{"generator", "fullerene_task"}, {"mode", "explicit_labels"}};
  }
  ds.provenance["atoms"] = g.num_nodes();
  return ds;
}

std::vector<RootedPattern> adversarial_patterns(const MotifFamily& family, int count) {
  std::vector<RootedPattern> candidates;
  auto star = [](int k) {
    std::vector<Edge> e;
    for (int i = 1; i <= k; ++i) e.push_back(Edge{0, i});
    return RootedPattern(build_graph(k + 1, e), 0);
  };
  auto clique = [](int k) {
    std::vector<Edge> e;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) e.push_back(Edge{a, b});
    return RootedPattern(build_graph(k, e), 0);
  };
  auto fan = [](int k) {  // root joined to every node of a k-path
    std::vector<Edge> e;
    for (int i = 1; i <= k; ++i) e.push_back(Edge{0, i});
    for (int i = 1; i < k; ++i) e.push_back(Edge{i, i + 1});
    return RootedPattern(build_graph(k + 1, e), 0);
  };
  for (int k = 3; k <= 8; ++k) candidates.push_back(star(k));
  for (int k = 4; k <= 6; ++k) candidates.push_back(clique(k));
  for (int k = 3; k <= 5; ++k) candidates.push_back(fan(k));
  std::vector<RootedPattern> out;
  for (const RootedPattern& p : candidates) {
    if (static_cast<int>(out.size()) >= count) break;
    bool absent = true;
    for (const MotifSpec& m : family.motifs) absent &= !sub_iso(p.graph(), m.graph);
    if (absent) out.push_back(p);
  }
  return out;
}

std::vector<LabeledNode> FoldPlan::train(const LabeledDataset& ds, int fold) const {
  std::vector<LabeledNode> out;
  for (NodeId v = 0; v < static_cast<int>(fold_of.size()); ++v)
    if (fold_of[v] != fold) out.push_back({v, ds.labels[v]});
  return out;
}

std::vector<LabeledNode> FoldPlan::test(const LabeledDataset& ds, int fold) const {
  std::vector<LabeledNode> out;
  for (NodeId v = 0; v < static_cast<int>(fold_of.size()); ++v)
    if (fold_of[v] == fold) out.push_back({v, ds.labels[v]});
  return out;
}

FoldPlan make_folds(const LabeledDataset& ds, int k, std::uint64_t seed) {
  const int n = ds.graph.num_nodes();
  if (k < 2 || k > n) throw Error(ErrorCode::kBadK, "need 2 <= k <= n");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<NodeId>> by_class(ds.num_classes);
  for (NodeId v = 0; v < n; ++v) by_class[ds.labels[v]].push_back(v);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.fold_of.assign(n, 0);
  int position = 0;
  for (auto& members : by_class) {
    eegl::shuffle(members.begin(), members.end(), rng);
    for (NodeId v : members) plan.fold_of[v] = position++ % k;
  }
  return plan;
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir) {
  validate_dataset(ds);
  write_text_file(dir / "graph.json", graph_to_json(ds.graph).dump() + "\n");
  std::string labels;
  for (int l : ds.labels) labels += std::to_string(l) + "\n";
  write_text_file(dir / "labels.txt", labels);
  json prov = ds.provenance;
  prov["name"] = ds.name;
  prov["num_classes"] = ds.num_classes;
  if (!ds.motif_membership.empty()) prov["motif_membership"] = ds.motif_membership;
  write_text_file(dir / "provenance.json", prov.dump(2) + "\n");
}

LabeledDataset load_dataset(const std::filesystem::path& dir) {
  LabeledDataset ds;
  ds.graph = read_graph_file(dir / "graph.json").graph;
  std::istringstream in(read_text_file(dir / "labels.txt"));
  int l;
  while (in >> l) ds.labels.push_back(l);
  try {
    json prov = json::parse(read_text_file(dir / "provenance.json"));
    ds.name = prov.value("name", "dataset");
    ds.num_classes = prov.at("num_classes");
    if (prov.contains("motif_membership"))
      ds.motif_membership = prov["motif_membership"].get<std::vector<int>>();
    prov.erase("name");
    prov.erase("num_classes");
    prov.erase("motif_membership");
    ds.provenance = prov;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "provenance.json: " + std::string(e.what()));
  }
  validate_dataset(ds);
  return ds;
}

}  // namespace eegl
