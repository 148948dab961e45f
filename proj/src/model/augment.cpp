#include <cctype>
#include <functional>
#include <stdexcept>

#include "mfgnn/model/block_ast.hpp"

namespace mfgnn::model {

using lang::Node;
using lang::NodeKind;

std::size_t TreeNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::size_t TreeNode::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

bool structurally_equal(const TreeNode& a, const TreeNode& b) {
  if (a.label != b.label || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

std::vector<std::string> split_camel(std::string_view id) {
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < id.size(); ++i) {
    const char c = id[i];
    if (c == '_') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    if (!cur.empty() && upper(c)) {
      const char prev = id[i - 1];
      const bool after_lower = !upper(prev);
      const bool run_end = upper(prev) && i + 1 < id.size() && id[i + 1] != '_' &&
                           !upper(id[i + 1]) && std::isalpha(static_cast<unsigned char>(id[i + 1]));
      if (after_lower || run_end) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    }
    cur += c;
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  if (out.empty()) out.emplace_back(id);  // all underscores
  return out;
}

std::vector<std::string> decompose_constant(std::string_view literal) {
  std::vector<std::string> out;
  for (char c : literal) {
    if (c == '-') {
      out.emplace_back(kSignLeaf);
    } else if (c == '.') {
      out.emplace_back(kPointLeaf);
    } else {
      out.emplace_back(1, c);
    }
  }
  return out;
}

std::vector<std::string> type_leaves(const lang::Type& type) {
  if (type.is_basic()) return {type.str()};
  std::vector<std::string> out = split_camel(type.record);
  if (type.array) out.emplace_back("[]");
  return out;
}

namespace {

TreeNode leaf(std::string label) { return TreeNode(std::move(label)); }

TreeNode expr_tree(const Node& e, const ir::TacInstr& instr) {
  if (instr.temp_for(e) != nullptr) return TreeNode("Temp", &e);
  switch (e.kind) {
    case NodeKind::Ident: return TreeNode("Local", &e);
    case NodeKind::IntLit:
    case NodeKind::FloatLit:
    case NodeKind::BoolLit: return TreeNode("Const", &e);
    case NodeKind::NullLit: return TreeNode("NULL", &e);
    case NodeKind::Binary: {
      TreeNode n("BOp", &e);
      n.add(expr_tree(e.child(0), instr));
      n.add(leaf(e.text));
      n.add(expr_tree(e.child(1), instr));
      return n;
    }
    case NodeKind::Unary: {
      TreeNode n("UOp", &e);
      n.add(leaf(e.text));
      n.add(expr_tree(e.child(0), instr));
      return n;
    }
    case NodeKind::Index: {
      TreeNode n("ArrayRef", &e);
      n.add(expr_tree(e.child(0), instr));
      n.add(expr_tree(e.child(1), instr));
      return n;
    }
    case NodeKind::Field: {
      TreeNode n("FieldRef", &e);
      n.add(expr_tree(e.child(0), instr));
      n.add(leaf(e.text));
      return n;
    }
    case NodeKind::Call: {
      TreeNode n("Invoke", &e);
      n.add(TreeNode("Method", &e)).add(leaf(e.text));
      for (const auto& arg : e.children) n.add(expr_tree(*arg, instr));
      return n;
    }
    case NodeKind::Cast: {
      TreeNode n("Cast", &e);
      n.add(expr_tree(e.child(0), instr));
      return n;
    }
    default:
      throw std::logic_error("block tree: unexpected expression kind");
  }
}

TreeNode instr_tree(const ir::TacInstr& in) {
  const Node& b = *in.backing;
  switch (in.kind) {
    case ir::TacKind::Marker:
      return leaf(in.marker == ir::MarkerKind::Entry ? "FunctionDecl" : "FunctionExit");
    case ir::TacKind::DefStmt: {
      TreeNode n("DefStmt", &b);
      if (b.kind == NodeKind::VarDecl) {
        n.add(TreeNode("Local", &b));
        if (!b.children.empty()) {
          n.add(expr_tree(b.child(0), in));
        } else if (b.array_length >= 0) {
          n.add(TreeNode("NewArray", &b));
        }
      } else if (b.kind == NodeKind::Assign) {
        n.add(expr_tree(b.child(0), in));
        n.add(expr_tree(b.child(1), in));
      } else {
        n.add(TreeNode("Temp", &b));
        n.add(expr_tree(b, in));
      }
      return n;
    }
    case ir::TacKind::Call: {
      TreeNode call = expr_tree(b, in);
      if (in.dest.empty()) return call;
      TreeNode n("DefStmt", &b);
      n.add(TreeNode("Temp", &b));
      n.add(std::move(call));
      return n;
    }
    case ir::TacKind::BranchCond: {
      TreeNode n("Branch", &b);
      n.add(expr_tree(b, in));
      return n;
    }
    case ir::TacKind::Switch: {
      TreeNode n("Switch", &b);
      n.add(expr_tree(b.child(0), in));
      for (std::size_t i = 1; i < b.size(); ++i) {
        const Node& arm = b.child(i);
        if (arm.kind == NodeKind::Case) {
          n.add(TreeNode("Case", &arm)).add(TreeNode("Const", &arm));
        } else {
          n.add(leaf("Default"));
        }
      }
      return n;
    }
    case ir::TacKind::Return: {
      TreeNode n("ReturnOp", &b);
      if (b.kind == NodeKind::Return && !b.children.empty()) n.add(expr_tree(b.child(0), in));
      return n;
    }
    case ir::TacKind::Jump:
      return leaf("Goto");
  }
  throw std::logic_error("block tree: unexpected instruction kind");
}

void add_leaves(TreeNode& n, const std::vector<std::string>& leaves) {
  for (const auto& l : leaves) n.add(leaf(l));
}

lang::Type type_of(const Node& n) {
  if (!n.type) throw std::logic_error("block tree: node without type annotation");
  return *n.type;
}

void augment_node(TreeNode& n) {
  for (auto& c : n.children) augment_node(c);
  const Node* src = n.source;
  if (src != nullptr) {
    if (n.label == "Local") {
      n.add(leaf(src->text));
      add_leaves(n, type_leaves(type_of(*src)));
    } else if (n.label == "Temp" || n.label == "FieldRef" || n.label == "Method") {
      add_leaves(n, type_leaves(type_of(*src)));
    } else if (n.label == "Const") {
      // Constants carry digit leaves only; type leaves belong to variable uses.
      if (src->kind == NodeKind::BoolLit) {
        n.add(leaf(src->text));
      } else {
        add_leaves(n, decompose_constant(src->text));
      }
    } else if (n.label == "NewArray") {
      TreeNode c("Const");
      add_leaves(c, decompose_constant(std::to_string(src->array_length)));
      n.add(std::move(c));
      add_leaves(n, type_leaves(type_of(*src).element()));
    } else if (n.label == "Cast") {
      TreeNode from("SrcType");
      add_leaves(from, type_leaves(type_of(src->child(0))));
      TreeNode to("DstType");
      add_leaves(to, type_leaves(type_of(*src)));
      n.children.insert(n.children.begin(), std::move(to));
      n.children.insert(n.children.begin(), std::move(from));
    }
  }
}

void mark(TreeNode& n) {
  n.augmented = true;
  for (auto& c : n.children) mark(c);
}

}  // namespace

TreeNode raw_block_tree(const ir::BasicBlock& block) {
  TreeNode root("Block");
  for (const auto& in : block.instrs) root.add(instr_tree(in));
  return root;
}

void augment(TreeNode& root) {
  if (root.augmented) throw std::logic_error("block tree is already augmented");
  augment_node(root);
  mark(root);
}

BlockAst augment_block_ast(const ir::BasicBlock& block) {
  BlockAst out{block.id, raw_block_tree(block)};
  augment(out.root);
  return out;
}

std::vector<std::string> labels(const TreeNode& root) {
  std::vector<std::string> out;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& n) {
    out.push_back(n.label);
    for (const auto& c : n.children) walk(c);
  };
  walk(root);
  return out;
}

std::string render(const TreeNode& root) {
  std::string out;
  std::function<void(const TreeNode&, int)> walk = [&](const TreeNode& n, int depth) {
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + n.label + "\n";
    for (const auto& c : n.children) walk(c, depth + 1);
  };
  walk(root, 0);
  return out;
}

}  // namespace mfgnn::model
