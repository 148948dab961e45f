#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mfgnn::lang {

enum class TokenKind {
  Keyword,
  Identifier,
  IntLiteral,
  FloatLiteral,
  Operator,
  Punctuation,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  friend bool operator==(const Token&, const Token&) = default;
};

bool is_keyword(std::string_view word);

/// Splits MiniLang source into tokens. Comments (`//` and `/* */`) and
/// whitespace are dropped. Throws LexError on a character outside the
/// alphabet or an unterminated block comment.
std::vector<Token> tokenize(std::string_view source);

}  // namespace mfgnn::lang
