#include "mfgnn/lang/errors.hpp"
#include "mfgnn/lang/token.hpp"

#include <array>
#include <cctype>

namespace mfgnn::lang {

namespace {

constexpr std::array<std::string_view, 16> kKeywords = {
    "int",    "float", "bool",  "void", "type",    "if",     "else",  "while",
    "for",    "switch", "case", "default", "return", "true", "false", "null"};

// Longest first so that "<=" wins over "<".
constexpr std::array<std::string_view, 15> kOperators = {
    "<=", ">=", "==", "!=", "&&", "||", "+", "-",
    "*",  "/",  "%",  "<",  ">",  "!",  "="};

constexpr std::string_view kPunctuation = "(){}[];,:.";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (skip_trivia()) {
      const int line = line_;
      const int col = col_;
      const char c = src_[pos_];
      if (ident_start(c)) {
        std::size_t end = pos_;
        while (end < src_.size() && ident_char(src_[end])) ++end;
        std::string word(src_.substr(pos_, end - pos_));
        const TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
        out.push_back({kind, std::move(word), line, col});
        advance(end - pos_);
      } else if (digit(c)) {
        std::size_t end = pos_;
        while (end < src_.size() && digit(src_[end])) ++end;
        TokenKind kind = TokenKind::IntLiteral;
        if (end + 1 < src_.size() && src_[end] == '.' && digit(src_[end + 1])) {
          ++end;
          while (end < src_.size() && digit(src_[end])) ++end;
          kind = TokenKind::FloatLiteral;
        }
        out.push_back({kind, std::string(src_.substr(pos_, end - pos_)), line, col});
        advance(end - pos_);
      } else if (kPunctuation.find(c) != std::string_view::npos) {
        out.push_back({TokenKind::Punctuation, std::string(1, c), line, col});
        advance(1);
      } else {
        std::string_view op;
        for (std::string_view candidate : kOperators) {
          if (src_.substr(pos_, candidate.size()) == candidate) {
            op = candidate;
            break;
          }
        }
        if (op.empty()) {
          throw LexError(std::string("illegal character '") + c + "'", line, col);
        }
        out.push_back({TokenKind::Operator, std::string(op), line, col});
        advance(op.size());
      }
    }
    return out;
  }

 private:
  // Returns false at end of input.
  bool skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (src_.substr(pos_, 2) == "/*") {
        const int line = line_;
        const int col = col_;
        advance(2);
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance(1);
        if (pos_ >= src_.size()) throw LexError("unterminated comment", line, col);
        advance(2);
      } else {
        return true;
      }
    }
    return false;
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntLiteral: return "integer-literal";
    case TokenKind::FloatLiteral: return "float-literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string format_diagnostic(std::string_view file, int line, int column,
                              std::string_view severity, std::string_view message) {
  std::string out(file);
  out += ':' + std::to_string(line) + ':' + std::to_string(column) + ": ";
  out += severity;
  out += ": ";
  out += message;
  return out;
}

}  // namespace mfgnn::lang
