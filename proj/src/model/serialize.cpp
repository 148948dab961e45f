#include "mfgnn/model/serialize.hpp"

#include <json.hpp>

namespace mfgnn::model {

using nlohmann::json;

namespace {

json tree_to_json(const TreeNode& n) {
  json children = json::array();
  for (const auto& c : n.children) children.push_back(tree_to_json(c));
  return {{"label", n.label}, {"children", std::move(children)}};
}

TreeNode tree_from_json(const json& j) {
  if (!j.is_object() || !j.contains("label") || !j["label"].is_string() || j["label"].get<std::string>().empty()) {
    throw FormatError("ast node needs a non-empty string \"label\"");
  }
  TreeNode n(j["label"].get<std::string>());
  n.augmented = true;
  if (j.contains("children")) {
    if (!j["children"].is_array()) throw FormatError("ast \"children\" must be an array");
    for (const auto& c : j["children"]) n.add(tree_from_json(c));
  }
  return n;
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw FormatError(std::string("missing integer field \"") + key + "\"");
  }
  return j[key].get<int>();
}

}  // namespace

std::string serialize(const CodeGraph& graph) {
  json blocks = json::array();
  for (const auto& b : graph.blocks) blocks.push_back({{"id", b.block}, {"ast", tree_to_json(b.root)}});
  json edges = json::array();
  for (const auto& e : graph.edges) {
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"kind", ir::to_string(e.kind)}});
  }
  json j = {{"version", kCodeGraphVersion}, {"blocks", std::move(blocks)}, {"edges", std::move(edges)}};
  j["label"] = graph.label ? json(*graph.label) : json(nullptr);
  return j.dump(1);
}

CodeGraph deserialize(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("not JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("top level must be an object");
  if (!j.contains("version") || j["version"] != kCodeGraphVersion) {
    throw FormatError("unsupported CodeGraph version (expected 1)");
  }
  if (!j.contains("blocks") || !j["blocks"].is_array()) throw FormatError("missing \"blocks\" array");
  if (!j.contains("edges") || !j["edges"].is_array()) throw FormatError("missing \"edges\" array");

  CodeGraph g;
  for (const auto& b : j["blocks"]) {
    if (!b.is_object() || !b.contains("ast")) throw FormatError("block needs \"id\" and \"ast\"");
    g.blocks.push_back({require_int(b, "id"), tree_from_json(b["ast"])});
  }
  for (const auto& e : j["edges"]) {
    if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string()) {
      throw FormatError("edge needs a string \"kind\"");
    }
    ir::EdgeKind kind;
    try {
      kind = ir::edge_kind_from_string(e["kind"].get<std::string>());
    } catch (const std::invalid_argument& err) {
      throw FormatError(err.what());
    }
    g.edges.push_back({require_int(e, "src"), require_int(e, "dst"), kind});
  }
  if (j.contains("label") && !j["label"].is_null()) {
    if (!j["label"].is_number_integer()) throw FormatError("\"label\" must be an integer or null");
    g.label = j["label"].get<int>();
  }
  try {
    validate(g);
  } catch (const GraphError& err) {
    throw FormatError(err.what());
  }
  return g;
}

}  // namespace mfgnn::model
