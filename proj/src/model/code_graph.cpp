#include "mfgnn/model/code_graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mfgnn/dataflow/reaching.hpp"

namespace mfgnn::model {

std::size_t CodeGraph::count(ir::EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [kind](const ir::FlowEdge& e) { return e.kind == kind; }));
}

bool structurally_equal(const CodeGraph& a, const CodeGraph& b) {
  if (a.blocks.size() != b.blocks.size() || a.edges != b.edges || a.label != b.label) return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].block != b.blocks[i].block ||
        !structurally_equal(a.blocks[i].root, b.blocks[i].root)) {
      return false;
    }
  }
  return true;
}

void validate(const CodeGraph& graph) {
  const int n = static_cast<int>(graph.blocks.size());
  for (int i = 0; i < n; ++i) {
    const BlockAst& b = graph.blocks[static_cast<std::size_t>(i)];
    if (b.block != i) throw GraphError("block " + std::to_string(i) + " carries id " + std::to_string(b.block));
    if (b.root.label.empty()) throw GraphError("block " + std::to_string(i) + " has no tree");
  }
  std::set<ir::FlowEdge> seen;
  for (const auto& e : graph.edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw GraphError("dangling edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst));
    }
    if (!seen.insert(e).second) {
      throw GraphError("duplicate edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                       " [" + std::string(ir::to_string(e.kind)) + "]");
    }
  }
}

CodeGraph assemble_graph(const ir::Cfg& cfg, const std::vector<ir::FlowEdge>& dataflow,
                         std::vector<BlockAst> trees, std::optional<int> label) {
  if (trees.size() != cfg.blocks.size()) {
    throw GraphError("tree count " + std::to_string(trees.size()) + " differs from block count " +
                     std::to_string(cfg.blocks.size()));
  }
  std::sort(trees.begin(), trees.end(), [](const BlockAst& a, const BlockAst& b) { return a.block < b.block; });
  CodeGraph g;
  g.blocks = std::move(trees);
  g.edges = cfg.edges;
  g.edges.insert(g.edges.end(), dataflow.begin(), dataflow.end());
  g.label = label;
  validate(g);
  return g;
}

CodeGraph build_code_graph(const lang::ProgramAst& program, std::optional<int> label) {
  const ir::Cfg cfg = ir::build_cfg(program);
  std::vector<BlockAst> trees;
  trees.reserve(cfg.blocks.size());
  for (const auto& b : cfg.blocks) trees.push_back(augment_block_ast(b));
  return assemble_graph(cfg, dataflow::dataflow_edges(cfg), std::move(trees), label);
}

std::vector<double> bow_block_features(const BlockAst& block, const Vocabulary& vocab) {
  std::vector<double> counts(vocab.size(), 0.0);
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& n) {
    counts[static_cast<std::size_t>(vocab.index(n.label))] += 1.0;
    for (const auto& c : n.children) walk(c);
  };
  walk(block.root);
  return counts;
}

}  // namespace mfgnn::model
