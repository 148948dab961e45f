#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mfgnn/lang/ast.hpp"

namespace mfgnn::lang {

/// Lets a caller print a sub-expression differently (e.g. as a temporary).
using PrintHook = std::function<std::optional<std::string>(const Node&)>;

/// Renders an expression with the minimal parentheses needed to re-parse to
/// the same tree.
std::string print_expr(const Node& expr, const PrintHook& hook = {});

/// Renders a whole compilation unit as re-parseable MiniLang.
std::string print_program(const ProgramAst& program);

}  // namespace mfgnn::lang
