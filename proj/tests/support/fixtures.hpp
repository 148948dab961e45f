#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mfgnn/lang/parser.hpp"
#include "mfgnn/model/code_graph.hpp"
#include "mfgnn/train/dataset.hpp"

namespace mfgnn::testing {

inline std::filesystem::path fixture_dir() { return MFGNN_FIXTURE_DIR; }

inline std::filesystem::path fixture(const std::string& rel) { return fixture_dir() / rel; }

inline std::string read_fixture(const std::string& rel) {
  std::ifstream in(fixture(rel), std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Every compilable .mini file under the fixture tree, sorted.
inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(fixture_dir())) {
    if (e.path().extension() == ".mini" && e.path().parent_path().filename() != "bad") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void drop_sources(model::TreeNode& n) {
  n.source = nullptr;
  for (auto& c : n.children) drop_sources(c);
}

/// CodeGraph of an in-memory program; tree source links are cleared because
/// the ProgramAst does not outlive this call.
inline model::CodeGraph graph_of(const std::string& source, std::optional<int> label = std::nullopt) {
  const lang::ProgramAst program = lang::parse_source(source);
  model::CodeGraph g = model::build_code_graph(program, label);
  for (auto& b : g.blocks) drop_sources(b.root);
  return g;
}

}  // namespace mfgnn::testing
