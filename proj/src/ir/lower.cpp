#include <algorithm>
#include <stdexcept>

#include "mfgnn/ir/tac.hpp"
#include "mfgnn/lang/printer.hpp"

namespace mfgnn::ir {

using lang::Node;
using lang::NodeKind;

std::string_view to_string(TacKind kind) {
  switch (kind) {
    case TacKind::DefStmt: return "def-stmt";
    case TacKind::BranchCond: return "branch-cond";
    case TacKind::Switch: return "switch";
    case TacKind::Call: return "call";
    case TacKind::Return: return "return";
    case TacKind::Jump: return "jump";
    case TacKind::Marker: return "marker";
  }
  return "?";
}

bool is_temp(std::string_view name) { return name.size() > 2 && name.substr(0, 2) == "%t"; }

const std::string* TacInstr::temp_for(const Node& expr) const {
  for (const auto& h : hoisted) {
    if (h.expr == &expr) return &h.temp;
  }
  return nullptr;
}

std::string TacInstr::text(std::string_view target_prefix) const {
  const lang::PrintHook hook = [this](const Node& n) -> std::optional<std::string> {
    if (const std::string* t = temp_for(n)) return *t;
    return std::nullopt;
  };
  auto label = [&](int id) { return std::string(target_prefix) + std::to_string(id); };
  auto expr = [&](const Node& n) { return lang::print_expr(n, hook); };

  switch (kind) {
    case TacKind::Marker:
      return std::string(marker == MarkerKind::Entry ? "entry " : "exit ") + backing->text;
    case TacKind::DefStmt: {
      if (backing->kind == NodeKind::VarDecl) {
        if (!backing->children.empty()) return dest + " = " + expr(backing->child(0));
        if (backing->array_length >= 0) {
          return dest + " = new " + backing->type->element().str() + "[" +
                 std::to_string(backing->array_length) + "]";
        }
        return "declare " + backing->type->str() + " " + dest;
      }
      if (backing->kind == NodeKind::Assign) {
        return expr(backing->child(0)) + " = " + expr(backing->child(1));
      }
      return dest + " = " + expr(*backing);
    }
    case TacKind::Call: {
      const Node& call = backing->kind == NodeKind::ExprStmt ? backing->child(0) : *backing;
      std::string s = "call " + lang::print_expr(call, [this, &call](const Node& n) -> std::optional<std::string> {
        if (&n == &call) return std::nullopt;
        if (const std::string* t = temp_for(n)) return *t;
        return std::nullopt;
      });
      return dest.empty() ? s : dest + " = " + s;
    }
    case TacKind::BranchCond:
      return "if " + expr(*backing) + " goto " + label(targets.at(0)) + " else " +
             label(targets.at(1));
    case TacKind::Switch: {
      std::string s = "switch " + expr(backing->child(0)) + " [";
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (i > 0) s += ", ";
        s += case_values[i] ? std::to_string(*case_values[i]) : std::string("default");
        s += ": " + label(targets[i]);
      }
      return s + "]";
    }
    case TacKind::Return:
      if (backing->kind == NodeKind::Return && !backing->children.empty()) {
        return "return " + expr(backing->child(0));
      }
      return "return";
    case TacKind::Jump:
      return "goto " + label(targets.at(0));
  }
  return "?";
}

namespace {

bool within(const Node* n, const Node& root) {
  for (; n != nullptr; n = n->parent) {
    if (n == &root) return true;
  }
  return false;
}

/// Variable whose storage an assignment target writes, or empty when the
/// target is rooted in a call result.
std::string root_variable(const Node& target) {
  const Node* n = &target;
  while (n->kind == NodeKind::Index || n->kind == NodeKind::Field) n = &n->child(0);
  return n->kind == NodeKind::Ident ? n->text : std::string();
}

class FunctionLowerer {
 public:
  explicit FunctionLowerer(const Node& fn) {
    out_.name = fn.text;
    out_.decl = &fn;
  }

  TacFunction run() {
    const Node& fn = *out_.decl;
    for (const auto& stmt : lang::function_body(fn).children) statement(*stmt);
    if (reachable_) {
      TacInstr ret;
      ret.kind = TacKind::Return;
      ret.backing = &fn;
      emit(std::move(ret));
    }
    return std::move(out_);
  }

 private:
  // ---- labels and emission -------------------------------------------------
  int new_label() {
    out_.label_pos.push_back(0);
    targeted_.push_back(false);
    return static_cast<int>(out_.label_pos.size()) - 1;
  }

  void place(int label) {
    out_.label_pos[static_cast<std::size_t>(label)] = out_.instrs.size();
    if (targeted_[static_cast<std::size_t>(label)]) reachable_ = true;
  }

  void emit(TacInstr instr) {
    if (instr.backing == nullptr) throw std::logic_error("TAC instruction without backing AST");
    for (const auto& h : hoisted_) {
      if (within(h.expr, *instr.backing)) instr.hoisted.push_back(h);
    }
    for (int t : instr.targets) targeted_[static_cast<std::size_t>(t)] = true;
    if (instr.is_terminator()) reachable_ = false;
    out_.instrs.push_back(std::move(instr));
  }

  void jump(int label, const Node& backing) {
    if (!reachable_) return;
    TacInstr j;
    j.kind = TacKind::Jump;
    j.targets = {label};
    j.backing = &backing;
    emit(std::move(j));
  }

  std::string new_temp() { return "%t" + std::to_string(temp_counter_++); }

  // ---- expressions ---------------------------------------------------------
  /// Emits instructions for every call and value-context short-circuit inside
  /// `e`, in evaluation order, and records their temporaries.
  void prepare(const Node& e) {
    if (e.kind == NodeKind::Call) {
      for (const auto& arg : e.children) prepare(*arg);
      TacInstr call;
      call.kind = TacKind::Call;
      call.dest = new_temp();
      call.callee = e.text;
      call.backing = &e;
      for (const auto& arg : e.children) collect_uses(*arg, call.uses);
      const std::string temp = call.dest;
      emit(std::move(call));
      hoisted_.push_back({&e, temp});
      return;
    }
    if (e.kind == NodeKind::Binary && (e.text == "&&" || e.text == "||")) {
      const Node& lhs = e.child(0);
      const Node& rhs = e.child(1);
      const std::string temp = new_temp();
      prepare(lhs);
      define_temp(temp, lhs);
      hoisted_.push_back({&lhs, temp});
      const int rhs_label = new_label();
      const int end_label = new_label();
      TacInstr br;
      br.kind = TacKind::BranchCond;
      br.backing = &lhs;
      br.uses = {temp};
      br.targets = e.text == "&&" ? std::vector<int>{rhs_label, end_label}
                                  : std::vector<int>{end_label, rhs_label};
      emit(std::move(br));
      place(rhs_label);
      prepare(rhs);
      define_temp(temp, rhs);
      place(end_label);
      hoisted_.push_back({&e, temp});
      return;
    }
    for (const auto& c : e.children) prepare(*c);
  }

  void define_temp(const std::string& temp, const Node& value) {
    TacInstr def;
    def.kind = TacKind::DefStmt;
    def.dest = temp;
    def.backing = &value;
    collect_uses(value, def.uses);
    emit(std::move(def));
  }

  void collect_uses(const Node& e, std::vector<std::string>& uses) const {
    for (auto it = hoisted_.rbegin(); it != hoisted_.rend(); ++it) {
      if (it->expr == &e) {
        uses.push_back(it->temp);
        return;
      }
    }
    if (e.kind == NodeKind::Ident) {
      uses.push_back(e.text);
      return;
    }
    for (const auto& c : e.children) collect_uses(*c, uses);
  }

  /// Jumping code: control reaches `on_true` iff `e` evaluates to true.
  void cond(const Node& e, int on_true, int on_false) {
    if (e.kind == NodeKind::Binary && (e.text == "&&" || e.text == "||")) {
      const int mid = new_label();
      if (e.text == "&&") {
        cond(e.child(0), mid, on_false);
      } else {
        cond(e.child(0), on_true, mid);
      }
      place(mid);
      cond(e.child(1), on_true, on_false);
      return;
    }
    prepare(e);
    TacInstr br;
    br.kind = TacKind::BranchCond;
    br.backing = &e;
    collect_uses(e, br.uses);
    br.targets = {on_true, on_false};
    emit(std::move(br));
  }

  // ---- statements ----------------------------------------------------------
  void statement(const Node& s) {
    hoisted_.clear();
    switch (s.kind) {
      case NodeKind::Block:
        for (const auto& c : s.children) statement(*c);
        break;
      case NodeKind::VarDecl: {
        TacInstr def;
        def.kind = TacKind::DefStmt;
        def.dest = s.text;
        def.backing = &s;
        if (!s.children.empty()) {
          prepare(s.child(0));
          collect_uses(s.child(0), def.uses);
        }
        emit(std::move(def));
        break;
      }
      case NodeKind::Assign: {
        const Node& target = s.child(0);
        const Node& value = s.child(1);
        TacInstr def;
        def.kind = TacKind::DefStmt;
        def.backing = &s;
        if (target.kind == NodeKind::Ident) {
          prepare(value);
          def.dest = target.text;
        } else {
          prepare(target);
          prepare(value);
          def.dest = root_variable(target);
          def.weak_def = true;
          // the written location's base is not read; its subscripts are
          for (const Node* n = &target; n->kind == NodeKind::Index || n->kind == NodeKind::Field;
               n = &n->child(0)) {
            if (n->kind == NodeKind::Index) collect_uses(n->child(1), def.uses);
            if (n->child(0).kind != NodeKind::Index && n->child(0).kind != NodeKind::Field &&
                n->child(0).kind != NodeKind::Ident) {
              collect_uses(n->child(0), def.uses);
            }
          }
        }
        collect_uses(value, def.uses);
        emit(std::move(def));
        break;
      }
      case NodeKind::ExprStmt: {
        const Node& call = s.child(0);
        for (const auto& arg : call.children) prepare(*arg);
        TacInstr instr;
        instr.kind = TacKind::Call;
        instr.callee = call.text;
        instr.backing = &call;
        for (const auto& arg : call.children) collect_uses(*arg, instr.uses);
        emit(std::move(instr));
        break;
      }
      case NodeKind::Return: {
        TacInstr ret;
        ret.kind = TacKind::Return;
        ret.backing = &s;
        if (!s.children.empty()) {
          prepare(s.child(0));
          collect_uses(s.child(0), ret.uses);
        }
        emit(std::move(ret));
        break;
      }
      case NodeKind::If: {
        const int then_label = new_label();
        const int join = new_label();
        const bool has_else = s.size() > 2;
        const int else_label = has_else ? new_label() : join;
        cond(s.child(0), then_label, else_label);
        place(then_label);
        statement(s.child(1));
        if (has_else) {
          jump(join, s);
          place(else_label);
          statement(s.child(2));
        }
        place(join);
        break;
      }
      case NodeKind::While: {
        const int header = new_label();
        const int body = new_label();
        const int exit = new_label();
        place(header);
        cond(s.child(0), body, exit);
        place(body);
        statement(s.child(1));
        jump(header, s);
        place(exit);
        break;
      }
      case NodeKind::For: {
        statement(s.child(0));
        hoisted_.clear();
        const int header = new_label();
        const int body = new_label();
        const int exit = new_label();
        place(header);
        cond(s.child(1), body, exit);
        place(body);
        statement(s.child(3));
        statement(s.child(2));
        jump(header, s);
        place(exit);
        break;
      }
      case NodeKind::Switch: {
        const Node& scrutinee = s.child(0);
        prepare(scrutinee);
        TacInstr sw;
        sw.kind = TacKind::Switch;
        sw.backing = &s;
        collect_uses(scrutinee, sw.uses);
        std::vector<int> arm_labels;
        bool has_default = false;
        for (std::size_t i = 1; i < s.size(); ++i) {
          const Node& arm = s.child(i);
          arm_labels.push_back(new_label());
          sw.targets.push_back(arm_labels.back());
          if (arm.kind == NodeKind::Case) {
            sw.case_values.emplace_back(std::stoll(arm.text));
          } else {
            sw.case_values.emplace_back(std::nullopt);
            has_default = true;
          }
        }
        const int join = new_label();
        if (!has_default) {
          sw.targets.push_back(join);
          sw.case_values.emplace_back(std::nullopt);
        }
        emit(std::move(sw));
        for (std::size_t i = 1; i < s.size(); ++i) {
          place(arm_labels[i - 1]);
          statement(s.child(i).child(0));
          if (i + 1 < s.size()) jump(join, s);
        }
        place(join);
        break;
      }
      default:
        throw std::logic_error("lower_to_tac: unexpected statement kind");
    }
  }

  TacFunction out_;
  std::vector<bool> targeted_;
  std::vector<Hoisted> hoisted_;
  bool reachable_ = true;
  int temp_counter_ = 0;
};

}  // namespace

TacProgram lower_to_tac(const lang::ProgramAst& program) {
  TacProgram out;
  for (const Node* fn : program.functions()) out.push_back(FunctionLowerer(*fn).run());
  return out;
}

}  // namespace mfgnn::ir
