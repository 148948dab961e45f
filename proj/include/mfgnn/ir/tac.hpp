#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfgnn/lang/ast.hpp"

namespace mfgnn::ir {

enum class TacKind { DefStmt, BranchCond, Switch, Call, Return, Jump, Marker };

std::string_view to_string(TacKind kind);

enum class MarkerKind { None, Entry, Exit };

/// Sub-expression already evaluated into a temporary by an earlier
/// instruction.
struct Hoisted {
  const lang::Node* expr;
  std::string temp;
};

/// One statement-level three-address instruction. Only calls and
/// short-circuit operators are split into temporaries (`%tN`); the remaining
/// arithmetic stays inside `backing` so block trees keep source structure.
struct TacInstr {
  TacKind kind = TacKind::DefStmt;
  MarkerKind marker = MarkerKind::None;
  /// Variable or temporary written by a DefStmt/Call; empty otherwise.
  std::string dest;
  /// Array-element or field write: defines `dest` without killing it.
  bool weak_def = false;
  /// Variables and temporaries read, in evaluation order.
  std::vector<std::string> uses;
  /// Label ids: BranchCond {true, false}; Switch {arm...}; Jump {target}.
  std::vector<int> targets;
  /// Switch only: case value per target; the default arm has none.
  std::vector<std::optional<std::int64_t>> case_values;
  std::string callee;
  /// Originating AST subtree; never null.
  const lang::Node* backing = nullptr;
  std::vector<Hoisted> hoisted;

  bool is_terminator() const {
    return kind == TacKind::BranchCond || kind == TacKind::Switch || kind == TacKind::Jump ||
           kind == TacKind::Return;
  }
  /// Temporary standing in for `expr`, if any.
  const std::string* temp_for(const lang::Node& expr) const;
  /// Human-readable TAC text, e.g. `c = a + b` or `if a < b goto L1 else L2`.
  /// Targets print as `<target_prefix><id>`.
  std::string text(std::string_view target_prefix = "L") const;
};

bool is_temp(std::string_view name);

struct TacFunction {
  std::string name;
  const lang::Node* decl = nullptr;
  std::vector<TacInstr> instrs;
  /// label id -> index of the instruction the label precedes
  std::vector<std::size_t> label_pos;
};

using TacProgram = std::vector<TacFunction>;

/// Lowers every function of a resolved program. Total on resolved ASTs.
TacProgram lower_to_tac(const lang::ProgramAst& program);

}  // namespace mfgnn::ir
