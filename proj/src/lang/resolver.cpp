#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mfgnn/lang/errors.hpp"
#include "mfgnn/lang/parser.hpp"

namespace mfgnn::lang {

namespace {

[[noreturn]] void fail(const Node& at, const std::string& message) {
  throw ResolveError(message, at.span.line, at.span.column);
}

bool assignable(const Type& to, const Type& from) {
  if (to == from) return true;
  if (!to.array && !from.array && to.base == BaseType::Float && from.base == BaseType::Int) {
    return true;
  }
  return from.base == BaseType::Null && (to.array || to.base == BaseType::Record);
}

bool castable(const Type& from, const Type& to) {
  if (from.array || to.array) return from == to;
  if (from.base == BaseType::Record || to.base == BaseType::Record) {
    return from == to || from.base == BaseType::Null;
  }
  return from.base != BaseType::Void && from.base != BaseType::Null;
}

class Resolver {
 public:
  explicit Resolver(ProgramAst& program) : program_(program) {}

  void run() {
    Node& root = program_.root();
    for (const auto& child : root.children) {
      if (child->kind == NodeKind::RecordDecl) declare_record(*child);
    }
    for (const auto& child : root.children) {
      if (child->kind == NodeKind::RecordDecl) check_record_fields(*child);
    }
    for (const auto& child : root.children) {
      if (child->kind == NodeKind::Function) {
        if (!functions_.emplace(child->text, child.get()).second) {
          fail(*child, "duplicate declaration of function '" + child->text + "'");
        }
      }
    }
    for (const auto& child : root.children) {
      if (child->kind == NodeKind::Function) function(*child);
    }
  }

 private:
  void declare_record(const Node& rec) {
    if (!std::isupper(static_cast<unsigned char>(rec.text.front()))) {
      fail(rec, "record type '" + rec.text + "' must use a CamelCase name");
    }
    if (!records_.emplace(rec.text, &rec).second) {
      fail(rec, "duplicate declaration of type '" + rec.text + "'");
    }
  }

  void check_record_fields(const Node& rec) {
    std::set<std::string> names;
    for (const auto& f : rec.children) {
      if (!names.insert(f->text).second) {
        fail(*f, "duplicate field '" + f->text + "' in type '" + rec.text + "'");
      }
      check_type_exists(*f, *f->type);
    }
  }

  void check_type_exists(const Node& at, const Type& t) {
    if (t.base == BaseType::Record && records_.count(t.record) == 0) {
      fail(at, "unknown type '" + t.record + "'");
    }
  }

  // ---- scopes --------------------------------------------------------------
  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }

  void declare(const Node& decl) {
    if (!scopes_.back().emplace(decl.text, &decl).second) {
      fail(decl, "duplicate declaration of '" + decl.text + "'");
    }
  }

  const Node* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (auto found = it->find(name); found != it->end()) return found->second;
    }
    return nullptr;
  }

  // ---- statements ----------------------------------------------------------
  void function(Node& fn) {
    current_return_ = *fn.type;
    check_type_exists(fn, *fn.type);
    push_scope();
    for (const auto& child : fn.children) {
      if (child->kind == NodeKind::Param) {
        check_type_exists(*child, *child->type);
        declare(*child);
      }
    }
    // function body shares the parameter scope
    for (const auto& stmt : fn.children.back()->children) statement(*stmt);
    pop_scope();
  }

  void block(Node& blk) {
    push_scope();
    for (const auto& stmt : blk.children) statement(*stmt);
    pop_scope();
  }

  void require_bool(Node& cond) {
    const Type t = expr(cond);
    if (t != Type::basic(BaseType::Bool)) fail(cond, "condition must be bool, found " + t.str());
  }

  void statement(Node& s) {
    switch (s.kind) {
      case NodeKind::Block:
        block(s);
        break;
      case NodeKind::VarDecl: {
        check_type_exists(s, *s.type);
        if (!s.children.empty()) {
          const Type init = expr(*s.children[0]);
          if (!assignable(*s.type, init)) {
            fail(s, "cannot initialize " + s.type->str() + " '" + s.text + "' with " + init.str());
          }
        }
        declare(s);
        break;
      }
      case NodeKind::Assign: {
        const Type target = expr(*s.children[0]);
        const Type value = expr(*s.children[1]);
        if (!assignable(target, value)) {
          fail(s, "cannot assign " + value.str() + " to " + target.str());
        }
        break;
      }
      case NodeKind::If:
        require_bool(*s.children[0]);
        statement(*s.children[1]);
        if (s.children.size() > 2) statement(*s.children[2]);
        break;
      case NodeKind::While:
        require_bool(*s.children[0]);
        statement(*s.children[1]);
        break;
      case NodeKind::For:
        push_scope();
        statement(*s.children[0]);
        require_bool(*s.children[1]);
        statement(*s.children[2]);
        statement(*s.children[3]);
        pop_scope();
        break;
      case NodeKind::Switch: {
        const Type scrutinee = expr(*s.children[0]);
        if (scrutinee != Type::basic(BaseType::Int)) {
          fail(*s.children[0], "switch scrutinee must be int, found " + scrutinee.str());
        }
        std::set<std::string> values;
        bool seen_default = false;
        for (std::size_t i = 1; i < s.children.size(); ++i) {
          Node& arm = *s.children[i];
          if (arm.kind == NodeKind::Case && !values.insert(arm.text).second) {
            fail(arm, "duplicate case value " + arm.text);
          }
          if (arm.kind == NodeKind::Default) {
            if (seen_default) fail(arm, "duplicate default arm");
            seen_default = true;
          }
          block(*arm.children[0]);
        }
        break;
      }
      case NodeKind::Return: {
        const bool is_void = current_return_ == Type::basic(BaseType::Void);
        if (s.children.empty()) {
          if (!is_void) fail(s, "missing return value in function returning " + current_return_.str());
        } else {
          const Type t = expr(*s.children[0]);
          if (is_void) fail(s, "void function cannot return a value");
          if (!assignable(current_return_, t)) {
            fail(s, "cannot return " + t.str() + " from function returning " + current_return_.str());
          }
        }
        break;
      }
      case NodeKind::ExprStmt:
        if (s.children[0]->kind != NodeKind::Call) fail(s, "expression statement must be a call");
        expr(*s.children[0]);
        break;
      default:
        fail(s, "unexpected statement");
    }
  }

  // ---- expressions ---------------------------------------------------------
  Type expr(Node& e) {
    Type t = infer(e);
    e.type = t;
    return t;
  }

  Type infer(Node& e) {
    switch (e.kind) {
      case NodeKind::IntLit: return Type::basic(BaseType::Int);
      case NodeKind::FloatLit: return Type::basic(BaseType::Float);
      case NodeKind::BoolLit: return Type::basic(BaseType::Bool);
      case NodeKind::NullLit: return Type::basic(BaseType::Null);
      case NodeKind::Ident: {
        const Node* decl = lookup(e.text);
        if (decl == nullptr) fail(e, "undeclared identifier '" + e.text + "'");
        e.decl = decl;
        return *decl->type;
      }
      case NodeKind::Index: {
        const Type base = expr(*e.children[0]);
        const Type index = expr(*e.children[1]);
        if (!base.array) fail(e, "indexing non-array of type " + base.str());
        if (index != Type::basic(BaseType::Int)) fail(*e.children[1], "array index must be int");
        return base.element();
      }
      case NodeKind::Field: {
        const Type base = expr(*e.children[0]);
        if (base.base != BaseType::Record || base.array) {
          fail(e, "field access on non-record type " + base.str());
        }
        const Node* rec = records_.at(base.record);
        for (const auto& f : rec->children) {
          if (f->text == e.text) {
            e.decl = f.get();
            return *f->type;
          }
        }
        fail(e, "type '" + base.record + "' has no field '" + e.text + "'");
      }
      case NodeKind::Unary: {
        const Type operand = expr(*e.children[0]);
        if (e.text == "-") {
          if (!operand.is_numeric()) fail(e, "unary '-' needs a numeric operand");
          return operand;
        }
        if (operand != Type::basic(BaseType::Bool)) fail(e, "'!' needs a bool operand");
        return operand;
      }
      case NodeKind::Binary: return binary(e);
      case NodeKind::Call: {
        auto it = functions_.find(e.text);
        if (it == functions_.end()) fail(e, "undeclared function '" + e.text + "'");
        const Node& fn = *it->second;
        const auto params = function_params(fn);
        if (params.size() != e.children.size()) {
          fail(e, "call to '" + e.text + "' expects " + std::to_string(params.size()) +
                      " argument(s), got " + std::to_string(e.children.size()));
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
          const Type arg = expr(*e.children[i]);
          if (!assignable(*params[i]->type, arg)) {
            fail(*e.children[i], "argument " + std::to_string(i + 1) + " of '" + e.text +
                                     "' expects " + params[i]->type->str() + ", got " + arg.str());
          }
        }
        e.decl = &fn;
        return *fn.type;
      }
      case NodeKind::Cast: {
        const Type from = expr(*e.children[0]);
        check_type_exists(e, *e.type);
        if (!castable(from, *e.type)) fail(e, "cannot cast " + from.str() + " to " + e.type->str());
        return *e.type;
      }
      default:
        fail(e, "unexpected expression");
    }
  }

  Type binary(Node& e) {
    const Type l = expr(*e.children[0]);
    const Type r = expr(*e.children[1]);
    const std::string& op = e.text;
    const Type boolean = Type::basic(BaseType::Bool);
    if (op == "&&" || op == "||") {
      if (l != boolean || r != boolean) fail(e, "'" + op + "' needs bool operands");
      return boolean;
    }
    if (op == "==" || op == "!=") {
      const bool ok = (l.is_numeric() && r.is_numeric()) || l == r || assignable(l, r) ||
                      assignable(r, l);
      if (!ok) fail(e, "cannot compare " + l.str() + " with " + r.str());
      return boolean;
    }
    if (!l.is_numeric() || !r.is_numeric()) {
      fail(e, "'" + op + "' needs numeric operands, got " + l.str() + " and " + r.str());
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return boolean;
    if (op == "%") {
      if (l.base != BaseType::Int || r.base != BaseType::Int) fail(e, "'%' needs int operands");
      return l;
    }
    if (l.base == BaseType::Float || r.base == BaseType::Float) return Type::basic(BaseType::Float);
    return Type::basic(BaseType::Int);
  }

  ProgramAst& program_;
  std::map<std::string, const Node*> records_;
  std::map<std::string, const Node*> functions_;
  std::vector<std::map<std::string, const Node*>> scopes_;
  Type current_return_;
};

}  // namespace

void resolve(ProgramAst& program) { Resolver(program).run(); }

}  // namespace mfgnn::lang
