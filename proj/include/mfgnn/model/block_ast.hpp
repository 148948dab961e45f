#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mfgnn/ir/cfg.hpp"

namespace mfgnn::model {

/// Node of a block tree. `source` links back into the ProgramAst while the
/// tree is built from a Cfg; trees read from disk have no source.
struct TreeNode {
  std::string label;
  std::vector<TreeNode> children;
  const lang::Node* source = nullptr;
  bool augmented = false;

  TreeNode() = default;
  explicit TreeNode(std::string l, const lang::Node* src = nullptr)
      : label(std::move(l)), source(src) {}
  TreeNode& add(TreeNode child) {
    children.push_back(std::move(child));
    return children.back();
  }
  std::size_t node_count() const;
  std::size_t depth() const;
};

/// Labels and child order only.
bool structurally_equal(const TreeNode& a, const TreeNode& b);

struct BlockAst {
  int block = 0;
  TreeNode root;
};

/// Sign and point leaves of decomposed constants.
inline constexpr std::string_view kSignLeaf = "<sign>";
inline constexpr std::string_view kPointLeaf = "<point>";

/// Splits at underscores, lower-to-upper transitions, and before the last
/// capital of an upper-case run followed by lower case. Digits count as lower.
std::vector<std::string> split_camel(std::string_view identifier);

/// One leaf per character of a canonical decimal literal.
std::vector<std::string> decompose_constant(std::string_view literal);

/// Leaves naming a type: one for basic types (`int`, `float[]`), one per
/// CamelCase segment for records, followed by `[]` for record arrays.
std::vector<std::string> type_leaves(const lang::Type& type);

/// Block tree before augmentation: a `Block` root over one subtree per
/// instruction, hoisted sub-expressions replaced by `Temp` nodes.
TreeNode raw_block_tree(const ir::BasicBlock& block);

/// Adds type leaves, CamelCase subtokens, constant digits and cast type
/// subtrees in place. Throws std::logic_error when already augmented.
void augment(TreeNode& root);

/// raw_block_tree followed by augment.
BlockAst augment_block_ast(const ir::BasicBlock& block);

/// Pre-order list of labels.
std::vector<std::string> labels(const TreeNode& root);

/// Indented one-node-per-line rendering for debugging.
std::string render(const TreeNode& root);

}  // namespace mfgnn::model
