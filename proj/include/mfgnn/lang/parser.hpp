#pragma once

#include <span>
#include <string_view>

#include "mfgnn/lang/ast.hpp"
#include "mfgnn/lang/token.hpp"

namespace mfgnn::lang {

/// Maximum statement/expression nesting accepted by the parser.
inline constexpr int kMaxNestingDepth = 512;

/// Recursive-descent parse without name resolution. Throws ParseError on the
/// first unexpected token.
ProgramAst parse_syntax(std::span<const Token> tokens);

/// Binds identifiers and calls to their declarations and annotates every
/// expression with its type. Throws ResolveError.
void resolve(ProgramAst& program);

/// parse_syntax followed by resolve.
ProgramAst parse(std::span<const Token> tokens);

/// tokenize + parse.
ProgramAst parse_source(std::string_view source);

}  // namespace mfgnn::lang
