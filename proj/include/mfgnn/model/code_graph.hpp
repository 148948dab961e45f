#pragma once

#include <optional>
#include <vector>

#include "mfgnn/ir/cfg.hpp"
#include "mfgnn/model/block_ast.hpp"
#include "mfgnn/model/errors.hpp"
#include "mfgnn/model/vocabulary.hpp"

namespace mfgnn::model {

/// Block graph with one augmented tree per block. blocks[i].block == i.
struct CodeGraph {
  std::vector<BlockAst> blocks;
  std::vector<ir::FlowEdge> edges;
  std::optional<int> label;

  std::size_t block_count() const { return blocks.size(); }
  std::size_t count(ir::EdgeKind kind) const;
};

bool structurally_equal(const CodeGraph& a, const CodeGraph& b);

/// Throws GraphError on a missing/empty tree, a misnumbered block, a dangling
/// edge, or a duplicate edge.
void validate(const CodeGraph& graph);

/// Merges control, call and dataflow edges with the block trees.
CodeGraph assemble_graph(const ir::Cfg& cfg, const std::vector<ir::FlowEdge>& dataflow,
                         std::vector<BlockAst> trees, std::optional<int> label);

/// Whole pipeline from a resolved program: CFG, dataflow, augmented trees.
CodeGraph build_code_graph(const lang::ProgramAst& program, std::optional<int> label = std::nullopt);

/// Per-token label counts, length vocab.size().
std::vector<double> bow_block_features(const BlockAst& block, const Vocabulary& vocab);

}  // namespace mfgnn::model
