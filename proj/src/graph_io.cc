#include "eegl/graph_io.h"

#include <fstream>
#include <sstream>

#include "eegl/error.h"

namespace eegl {

using nlohmann::json;

json graph_to_json(const Graph& g, std::optional<NodeId> root) {
  json j;
  j["n"] = g.num_nodes();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  if (g.has_attrs()) j["node_labels"] = g.attrs();
  if (root) j["root"] = *root;
  return j;
}

GraphFile graph_from_json(const json& j) {
  try {
    GraphFile out;
    int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kParseError, "edge entry");
      edges.push_back(Edge{e[0].get<int>(), e[1].get<int>()});
    }
    out.graph = build_graph(n, edges);
    if (j.contains("node_labels")) {
      out.graph = out.graph.with_attrs(j["node_labels"].get<std::vector<int>>());
    }
    if (j.contains("faces")) out.faces = j["faces"].get<std::vector<std::vector<NodeId>>>();
    if (j.contains("root")) {
      NodeId r = j["root"].get<int>();
      if (r < 0 || r >= n) throw Error(ErrorCode::kNodeOutOfRange, "root");
      out.root = r;
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

std::string graph_to_text(const Graph& g) {
  std::ostringstream os;
  os << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

Graph graph_from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  long n = 0, m = 0;
  if (!(is >> n >> m) || n < 0 || m < 0) throw Error(ErrorCode::kParseError, "header 'n m'");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (long i = 0; i < m; ++i) {
    int u = 0, v = 0;
    if (!(is >> u >> v)) {
      throw Error(ErrorCode::kParseError, "expected " + std::to_string(m) + " edge lines");
    }
    edges.push_back(Edge{u, v});
  }
  return build_graph(static_cast<int>(n), edges);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

GraphFile read_graph_file(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return graph_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
  }
  return GraphFile{graph_from_text(text), {}, std::nullopt};
}

void write_graph_file(const std::filesystem::path& path, const Graph& g,
                      std::optional<NodeId> root) {
  if (path.extension() == ".json") {
    write_text_file(path, graph_to_json(g, root).dump() + "\n");
  } else {
    write_text_file(path, graph_to_text(g));
  }
}

std::string graph_to_dot(const Graph& g, const DotStyle& style) {
  std::ostringstream os;
  os << "graph \"" << style.name << "\" {\n";
  for (int v = 0; v < g.num_nodes(); ++v) {
    os << "  " << v << " [";
    bool is_root = style.root && *style.root == v;
    os << "root=" << (is_root ? "true" : "false");
    if (is_root) os << ", color=red, style=filled, fillcolor=red";
    if (g.has_attrs()) os << ", attr=" << g.attr(v);
    if (!style.node_classes.empty()) os << ", class=" << style.node_classes[v];
    os << "];\n";
  }
  for (const Edge& e : g.edges()) os << "  " << e.u << " -- " << e.v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace eegl
