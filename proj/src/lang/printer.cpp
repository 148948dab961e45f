#include "mfgnn/lang/printer.hpp"

#include <sstream>

namespace mfgnn::lang {

namespace {

int precedence(const Node& e) {
  if (e.kind != NodeKind::Binary) return 100;
  const std::string& op = e.text;
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  return 6;
}

bool is_literal(const Node& e) {
  return e.kind == NodeKind::IntLit || e.kind == NodeKind::FloatLit;
}

bool is_postfix_base(const Node& e) {
  return e.kind == NodeKind::Ident || e.kind == NodeKind::Index || e.kind == NodeKind::Field ||
         e.kind == NodeKind::Call;
}

std::string type_name(const Type& t) { return t.element().str(); }

class ExprPrinter {
 public:
  explicit ExprPrinter(PrintHook hook) : hook_(std::move(hook)) {}

  std::string operator()(const Node& e) const {
    if (hook_) {
      if (auto replaced = hook_(e)) return *replaced;
    }
    switch (e.kind) {
      case NodeKind::IntLit:
      case NodeKind::FloatLit:
      case NodeKind::BoolLit:
      case NodeKind::NullLit:
      case NodeKind::Ident:
        return e.text;
      case NodeKind::Index:
        return base(e.child(0)) + "[" + (*this)(e.child(1)) + "]";
      case NodeKind::Field:
        return base(e.child(0)) + "." + e.text;
      case NodeKind::Call: {
        std::string s = e.text + "(";
        for (std::size_t i = 0; i < e.size(); ++i) {
          if (i > 0) s += ", ";
          s += (*this)(e.child(i));
        }
        return s + ")";
      }
      case NodeKind::Unary: {
        const Node& operand = e.child(0);
        const bool wrap = operand.kind == NodeKind::Binary || (e.text == "-" && is_literal(operand));
        return e.text + (wrap ? "(" + (*this)(operand) + ")" : (*this)(operand));
      }
      case NodeKind::Cast: {
        const Node& operand = e.child(0);
        const bool wrap = operand.kind == NodeKind::Binary;
        return "(" + e.type->str() + ") " + (wrap ? "(" + (*this)(operand) + ")" : (*this)(operand));
      }
      case NodeKind::Binary: {
        const int p = precedence(e);
        const Node& l = e.child(0);
        const Node& r = e.child(1);
        std::string ls = (*this)(l);
        std::string rs = (*this)(r);
        if (precedence(l) < p) ls = "(" + ls + ")";
        if (precedence(r) <= p) rs = "(" + rs + ")";
        return ls + " " + e.text + " " + rs;
      }
      default:
        return "<" + std::string(to_string(e.kind)) + ">";
    }
  }

 private:
  std::string base(const Node& e) const {
    std::string s = (*this)(e);
    return is_postfix_base(e) ? s : "(" + s + ")";
  }

  PrintHook hook_;
};

class ProgramPrinter {
 public:
  std::string run(const ProgramAst& program) {
    for (const auto& item : program.root().children) {
      if (item->kind == NodeKind::RecordDecl) {
        record(*item);
      } else {
        function(*item);
      }
      out_ << "\n";
    }
    return out_.str();
  }

 private:
  void indent() { out_ << std::string(static_cast<std::size_t>(depth_) * 2, ' '); }

  void record(const Node& rec) {
    out_ << "type " << rec.text << " {\n";
    ++depth_;
    for (const auto& f : rec.children) {
      indent();
      out_ << type_name(*f->type) << " " << f->text << (f->type->array ? "[]" : "") << ";\n";
    }
    --depth_;
    out_ << "}\n";
  }

  void function(const Node& fn) {
    out_ << fn.type->str() << " " << fn.text << "(";
    bool first = true;
    for (const Node* p : function_params(fn)) {
      if (!first) out_ << ", ";
      first = false;
      out_ << type_name(*p->type) << " " << p->text << (p->type->array ? "[]" : "");
    }
    out_ << ") ";
    block(function_body(fn));
    out_ << "\n";
  }

  void block(const Node& blk) {
    out_ << "{\n";
    ++depth_;
    for (const auto& s : blk.children) {
      indent();
      statement(*s);
      out_ << "\n";
    }
    --depth_;
    indent();
    out_ << "}";
  }

  std::string simple(const Node& s) {
    const ExprPrinter expr{PrintHook{}};
    if (s.kind == NodeKind::VarDecl) {
      std::string text = type_name(*s.type) + " " + s.text;
      if (s.array_length >= 0) return text + "[" + std::to_string(s.array_length) + "]";
      if (s.type->array) text += "[]";
      if (!s.children.empty()) text += " = " + expr(s.child(0));
      return text;
    }
    if (s.kind == NodeKind::Assign) return expr(s.child(0)) + " = " + expr(s.child(1));
    return expr(s.child(0));  // ExprStmt
  }

  void statement(const Node& s) {
    const ExprPrinter expr{PrintHook{}};
    switch (s.kind) {
      case NodeKind::Block:
        block(s);
        break;
      case NodeKind::VarDecl:
      case NodeKind::Assign:
      case NodeKind::ExprStmt:
        out_ << simple(s) << ";";
        break;
      case NodeKind::If:
        out_ << "if (" << expr(s.child(0)) << ") ";
        statement(s.child(1));
        if (s.size() > 2) {
          out_ << " else ";
          statement(s.child(2));
        }
        break;
      case NodeKind::While:
        out_ << "while (" << expr(s.child(0)) << ") ";
        statement(s.child(1));
        break;
      case NodeKind::For:
        out_ << "for (" << simple(s.child(0)) << "; " << expr(s.child(1)) << "; "
             << simple(s.child(2)) << ") ";
        statement(s.child(3));
        break;
      case NodeKind::Switch:
        out_ << "switch (" << expr(s.child(0)) << ") {\n";
        ++depth_;
        for (std::size_t i = 1; i < s.size(); ++i) {
          const Node& arm = s.child(i);
          indent();
          out_ << (arm.kind == NodeKind::Case ? "case " + arm.text + ":" : std::string("default:"))
               << "\n";
          ++depth_;
          for (const auto& inner : arm.child(0).children) {
            indent();
            statement(*inner);
            out_ << "\n";
          }
          --depth_;
        }
        --depth_;
        indent();
        out_ << "}";
        break;
      case NodeKind::Return:
        out_ << "return";
        if (s.size() > 0) out_ << " " << expr(s.child(0));
        out_ << ";";
        break;
      default:
        out_ << "/* " << to_string(s.kind) << " */";
    }
  }

  std::ostringstream out_;
  int depth_ = 0;
};

}  // namespace

std::string print_expr(const Node& expr, const PrintHook& hook) { return ExprPrinter(hook)(expr); }

std::string print_program(const ProgramAst& program) { return ProgramPrinter().run(program); }

}  // namespace mfgnn::lang
