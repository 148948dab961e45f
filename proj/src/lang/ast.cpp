#include "mfgnn/lang/ast.hpp"

#include <stdexcept>

namespace mfgnn::lang {

std::string Type::str() const {
  std::string s;
  switch (base) {
    case BaseType::Int: s = "int"; break;
    case BaseType::Float: s = "float"; break;
    case BaseType::Bool: s = "bool"; break;
    case BaseType::Void: s = "void"; break;
    case BaseType::Null: s = "null"; break;
    case BaseType::Record: s = record; break;
  }
  if (array) s += "[]";
  return s;
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Program: return "Program";
    case NodeKind::RecordDecl: return "RecordDecl";
    case NodeKind::FieldDecl: return "FieldDecl";
    case NodeKind::Function: return "Function";
    case NodeKind::Param: return "Param";
    case NodeKind::Block: return "Block";
    case NodeKind::VarDecl: return "VarDecl";
    case NodeKind::Assign: return "Assign";
    case NodeKind::If: return "If";
    case NodeKind::While: return "While";
    case NodeKind::For: return "For";
    case NodeKind::Switch: return "Switch";
    case NodeKind::Case: return "Case";
    case NodeKind::Default: return "Default";
    case NodeKind::Return: return "Return";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::IntLit: return "IntLit";
    case NodeKind::FloatLit: return "FloatLit";
    case NodeKind::BoolLit: return "BoolLit";
    case NodeKind::NullLit: return "NullLit";
    case NodeKind::Ident: return "Ident";
    case NodeKind::Index: return "Index";
    case NodeKind::Field: return "Field";
    case NodeKind::Unary: return "Unary";
    case NodeKind::Binary: return "Binary";
    case NodeKind::Call: return "Call";
    case NodeKind::Cast: return "Cast";
  }
  return "?";
}

bool is_expression(NodeKind kind) { return kind >= NodeKind::IntLit; }

std::vector<const Node*> ProgramAst::functions() const {
  std::vector<const Node*> out;
  for (const auto& c : root_->children) {
    if (c->kind == NodeKind::Function) out.push_back(c.get());
  }
  return out;
}

std::vector<const Node*> ProgramAst::records() const {
  std::vector<const Node*> out;
  for (const auto& c : root_->children) {
    if (c->kind == NodeKind::RecordDecl) out.push_back(c.get());
  }
  return out;
}

const Node* ProgramAst::find_function(std::string_view name) const {
  for (const auto& c : root_->children) {
    if (c->kind == NodeKind::Function && c->text == name) return c.get();
  }
  return nullptr;
}

const Node* ProgramAst::find_record(std::string_view name) const {
  for (const auto& c : root_->children) {
    if (c->kind == NodeKind::RecordDecl && c->text == name) return c.get();
  }
  return nullptr;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.text != b.text || a.type != b.type ||
      a.array_length != b.array_length || a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

const Node& function_body(const Node& fn) {
  if (fn.kind != NodeKind::Function || fn.children.empty() ||
      fn.children.back()->kind != NodeKind::Block) {
    throw std::logic_error("function_body: not a function node");
  }
  return *fn.children.back();
}

std::vector<const Node*> function_params(const Node& fn) {
  std::vector<const Node*> out;
  for (const auto& c : fn.children) {
    if (c->kind == NodeKind::Param) out.push_back(c.get());
  }
  return out;
}

}  // namespace mfgnn::lang
