#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mfgnn::lang {

enum class BaseType { Int, Float, Bool, Void, Null, Record };

/// A MiniLang type: a basic type, a CamelCase record, or a 1-D array of either.
struct Type {
  BaseType base = BaseType::Int;
  std::string record;  // set iff base == Record
  bool array = false;

  static Type basic(BaseType b) { return Type{b, {}, false}; }
  static Type named(std::string name) { return Type{BaseType::Record, std::move(name), false}; }
  Type element() const { return Type{base, record, false}; }
  Type as_array() const { return Type{base, record, true}; }

  bool is_numeric() const { return !array && (base == BaseType::Int || base == BaseType::Float); }
  bool is_basic() const { return base != BaseType::Record; }
  std::string str() const;

  friend bool operator==(const Type&, const Type&) = default;
};

/// Closed set of node kinds; doubles as the seed of the AST vocabulary.
enum class NodeKind {
  Program,
  RecordDecl,
  FieldDecl,
  Function,
  Param,
  // statements
  Block,
  VarDecl,
  Assign,
  If,
  While,
  For,
  Switch,
  Case,
  Default,
  Return,
  ExprStmt,
  // expressions
  IntLit,
  FloatLit,
  BoolLit,
  NullLit,
  Ident,
  Index,
  Field,
  Unary,
  Binary,
  Call,
  Cast,
};

std::string_view to_string(NodeKind kind);
bool is_expression(NodeKind kind);

struct SourceSpan {
  int line = 0;
  int column = 0;
};

/// One AST node. Field usage per kind:
///   text  - identifier/function/field/record name, literal text, operator,
///           or canonical case value
///   type  - declared type (decls, params, functions, casts) or, after
///           resolution, the inferred type of an expression
///   decl  - for Ident: the VarDecl/Param it resolves to; for Call: the Function
///   array_length - VarDecl of a sized array `int a[10];`
struct Node {
  NodeKind kind;
  std::string text;
  std::optional<Type> type;
  SourceSpan span;
  std::vector<std::unique_ptr<Node>> children;
  Node* parent = nullptr;
  const Node* decl = nullptr;
  std::int64_t array_length = -1;

  Node(NodeKind k, std::string t, SourceSpan s) : kind(k), text(std::move(t)), span(s) {}

  Node& add(std::unique_ptr<Node> child) {
    child->parent = this;
    children.push_back(std::move(child));
    return *children.back();
  }
  const Node& child(std::size_t i) const { return *children.at(i); }
  std::size_t size() const { return children.size(); }
};

/// Parse tree of one compilation unit. Owns the node tree; everything
/// downstream (TAC, CFG, block trees) points into it, so it must outlive them.
class ProgramAst {
 public:
  explicit ProgramAst(std::unique_ptr<Node> root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  Node& root() { return *root_; }

  std::vector<const Node*> functions() const;
  std::vector<const Node*> records() const;
  const Node* find_function(std::string_view name) const;
  const Node* find_record(std::string_view name) const;

 private:
  std::unique_ptr<Node> root_;
};

/// Compares kind, text, type, array length and children recursively; spans
/// and resolution links are ignored.
bool structurally_equal(const Node& a, const Node& b);
inline bool structurally_equal(const ProgramAst& a, const ProgramAst& b) {
  return structurally_equal(a.root(), b.root());
}

/// Function body block of a Function node.
const Node& function_body(const Node& fn);
/// Param nodes of a Function node.
std::vector<const Node*> function_params(const Node& fn);

}  // namespace mfgnn::lang
