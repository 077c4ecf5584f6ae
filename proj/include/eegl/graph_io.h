#ifndef EEGL_GRAPH_IO_H_
#define EEGL_GRAPH_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eegl/graph.h"

namespace eegl {

// On-disk graph: {"n", "edges", "node_labels"?, "faces"?} or "n m" + edge lines.
struct GraphFile {
  Graph graph;
  std::vector<std::vector<NodeId>> faces;
  std::optional<NodeId> root;
};

nlohmann::json graph_to_json(const Graph& g, std::optional<NodeId> root = std::nullopt);
GraphFile graph_from_json(const nlohmann::json& j);

// Deterministic: edges in lexicographic order, one "u v" per line.
std::string graph_to_text(const Graph& g);
Graph graph_from_text(std::string_view text);

// Format chosen by content: a leading '{' selects JSON.
GraphFile read_graph_file(const std::filesystem::path& path);
void write_graph_file(const std::filesystem::path& path, const Graph& g,
                      std::optional<NodeId> root = std::nullopt);

struct DotStyle {
  std::string name = "G";
  std::optional<NodeId> root;
  std::vector<int> node_classes;  // optional, emitted as `class=` attributes
};

// Undirected DOT; the root node carries `root=true`.
std::string graph_to_dot(const Graph& g, const DotStyle& style = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace eegl

#endif  // EEGL_GRAPH_IO_H_
