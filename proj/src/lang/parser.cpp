#include "mfgnn/lang/parser.hpp"

#include <set>
#include <string>

#include "mfgnn/lang/errors.hpp"

namespace mfgnn::lang {

namespace {

int binary_precedence(const Token& t) {
  if (t.kind != TokenKind::Operator) return -1;
  const std::string& op = t.text;
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/" || op == "%") return 6;
  return -1;
}

std::string canonical_int(std::string_view digits, bool negative) {
  std::size_t i = 0;
  while (i + 1 < digits.size() && digits[i] == '0') ++i;
  std::string out(digits.substr(i));
  if (negative && out != "0") out.insert(out.begin(), '-');
  return out;
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i) {
      if (toks_[i].is(TokenKind::Keyword, "type") && toks_[i + 1].kind == TokenKind::Identifier) {
        record_names_.insert(toks_[i + 1].text);
      }
    }
  }

  ProgramAst run() {
    auto root = std::make_unique<Node>(NodeKind::Program, "", SourceSpan{1, 1});
    while (!at_end()) {
      if (peek().is(TokenKind::Keyword, "type")) {
        root->add(record_decl());
      } else {
        root->add(function());
      }
    }
    return ProgramAst(std::move(root));
  }

 private:
  // ---- token helpers -------------------------------------------------------
  bool at_end() const { return pos_ >= toks_.size(); }

  const Token& peek(std::size_t k = 0) const {
    static const Token kEof{TokenKind::Punctuation, "<eof>", 0, 0};
    return pos_ + k < toks_.size() ? toks_[pos_ + k] : kEof;
  }

  SourceSpan here() const {
    if (!at_end()) return {peek().line, peek().column};
    if (toks_.empty()) return {1, 1};
    const Token& last = toks_.back();
    return {last.line, last.column + static_cast<int>(last.text.size())};
  }

  [[noreturn]] void unexpected(std::string_view expected) const {
    const std::string found = at_end() ? "end of input" : "'" + peek().text + "'";
    const SourceSpan s = here();
    throw ParseError("unexpected " + found + ", expected " + std::string(expected), s.line,
                     s.column);
  }

  bool check(TokenKind kind, std::string_view text) const {
    return !at_end() && peek().is(kind, text);
  }
  bool check_punct(std::string_view p) const { return check(TokenKind::Punctuation, p); }
  bool check_op(std::string_view op) const { return check(TokenKind::Operator, op); }
  bool check_kw(std::string_view kw) const { return check(TokenKind::Keyword, kw); }

  bool accept_punct(std::string_view p) {
    if (!check_punct(p)) return false;
    ++pos_;
    return true;
  }

  const Token& expect_punct(std::string_view p) {
    if (!check_punct(p)) unexpected("'" + std::string(p) + "'");
    return toks_[pos_++];
  }

  const Token& expect_ident() {
    if (at_end() || peek().kind != TokenKind::Identifier) unexpected("identifier");
    return toks_[pos_++];
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxNestingDepth) {
        const SourceSpan s = p_.here();
        throw ParseError("nesting deeper than " + std::to_string(kMaxNestingDepth), s.line,
                         s.column);
      }
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  // ---- types ---------------------------------------------------------------
  bool at_type() const {
    if (at_end()) return false;
    const Token& t = peek();
    if (t.kind == TokenKind::Keyword) {
      return t.text == "int" || t.text == "float" || t.text == "bool" || t.text == "void";
    }
    return t.kind == TokenKind::Identifier && record_names_.count(t.text) > 0;
  }

  Type type_spec() {
    if (!at_type()) unexpected("type");
    const Token& t = toks_[pos_++];
    if (t.text == "int") return Type::basic(BaseType::Int);
    if (t.text == "float") return Type::basic(BaseType::Float);
    if (t.text == "bool") return Type::basic(BaseType::Bool);
    if (t.text == "void") return Type::basic(BaseType::Void);
    return Type::named(t.text);
  }

  // ---- declarations --------------------------------------------------------
  std::unique_ptr<Node> record_decl() {
    const SourceSpan s = here();
    ++pos_;  // 'type'
    const Token& name = expect_ident();
    auto rec = std::make_unique<Node>(NodeKind::RecordDecl, name.text, s);
    expect_punct("{");
    while (!check_punct("}")) {
      const SourceSpan fs = here();
      Type t = type_spec();
      const Token& fname = expect_ident();
      if (accept_punct("[")) {
        expect_punct("]");
        t = t.as_array();
      }
      expect_punct(";");
      auto field = std::make_unique<Node>(NodeKind::FieldDecl, fname.text, fs);
      field->type = t;
      rec->add(std::move(field));
    }
    expect_punct("}");
    return rec;
  }

  std::unique_ptr<Node> function() {
    const SourceSpan s = here();
    Type ret = type_spec();
    if (accept_punct("[")) {
      expect_punct("]");
      ret = ret.as_array();
    }
    const Token& name = expect_ident();
    auto fn = std::make_unique<Node>(NodeKind::Function, name.text, s);
    fn->type = ret;
    expect_punct("(");
    if (!check_punct(")")) {
      do {
        const SourceSpan ps = here();
        Type t = type_spec();
        const Token& pname = expect_ident();
        if (accept_punct("[")) {
          expect_punct("]");
          t = t.as_array();
        }
        auto param = std::make_unique<Node>(NodeKind::Param, pname.text, ps);
        param->type = t;
        fn->add(std::move(param));
      } while (accept_punct(","));
    }
    expect_punct(")");
    fn->add(block());
    return fn;
  }

  // ---- statements ----------------------------------------------------------
  std::unique_ptr<Node> block() {
    DepthGuard guard(*this);
    const SourceSpan s = here();
    expect_punct("{");
    auto blk = std::make_unique<Node>(NodeKind::Block, "", s);
    while (!check_punct("}")) {
      if (at_end()) unexpected("'}'");
      blk->add(statement());
    }
    expect_punct("}");
    return blk;
  }

  bool at_declaration() const {
    if (at_end()) return false;
    const Token& t = peek();
    if (t.kind == TokenKind::Keyword) {
      return t.text == "int" || t.text == "float" || t.text == "bool";
    }
    return t.kind == TokenKind::Identifier && record_names_.count(t.text) > 0 &&
           peek(1).kind == TokenKind::Identifier;
  }

  std::unique_ptr<Node> statement() {
    DepthGuard guard(*this);
    if (check_punct("{")) return block();
    if (check_kw("if")) return if_stmt();
    if (check_kw("while")) return while_stmt();
    if (check_kw("for")) return for_stmt();
    if (check_kw("switch")) return switch_stmt();
    if (check_kw("return")) return return_stmt();
    if (at_declaration()) {
      auto decl = declaration();
      expect_punct(";");
      return decl;
    }
    auto stmt = simple_statement();
    expect_punct(";");
    return stmt;
  }

  std::unique_ptr<Node> declaration() {
    const SourceSpan s = here();
    Type t = type_spec();
    if (t.base == BaseType::Void) {
      throw ParseError("variables cannot have type void", s.line, s.column);
    }
    const Token& name = expect_ident();
    auto decl = std::make_unique<Node>(NodeKind::VarDecl, name.text, s);
    if (accept_punct("[")) {
      t = t.as_array();
      if (!at_end() && peek().kind == TokenKind::IntLiteral) {
        decl->array_length = std::stoll(toks_[pos_++].text);
        expect_punct("]");
        decl->type = t;
        return decl;
      }
      expect_punct("]");
    }
    decl->type = t;
    if (check_op("=")) {
      ++pos_;
      decl->add(expression());
    }
    return decl;
  }

  // assignment or expression statement, without the trailing ';'
  std::unique_ptr<Node> simple_statement() {
    const SourceSpan s = here();
    auto lhs = expression();
    if (check_op("=")) {
      if (lhs->kind != NodeKind::Ident && lhs->kind != NodeKind::Index &&
          lhs->kind != NodeKind::Field) {
        throw ParseError("invalid assignment target", s.line, s.column);
      }
      ++pos_;
      auto assign = std::make_unique<Node>(NodeKind::Assign, "=", s);
      assign->add(std::move(lhs));
      assign->add(expression());
      return assign;
    }
    auto stmt = std::make_unique<Node>(NodeKind::ExprStmt, "", s);
    stmt->add(std::move(lhs));
    return stmt;
  }

  std::unique_ptr<Node> if_stmt() {
    const SourceSpan s = here();
    ++pos_;
    auto node = std::make_unique<Node>(NodeKind::If, "", s);
    expect_punct("(");
    node->add(expression());
    expect_punct(")");
    node->add(statement());
    if (check_kw("else")) {
      ++pos_;
      node->add(statement());
    }
    return node;
  }

  std::unique_ptr<Node> while_stmt() {
    const SourceSpan s = here();
    ++pos_;
    auto node = std::make_unique<Node>(NodeKind::While, "", s);
    expect_punct("(");
    node->add(expression());
    expect_punct(")");
    node->add(statement());
    return node;
  }

  std::unique_ptr<Node> for_stmt() {
    const SourceSpan s = here();
    ++pos_;
    auto node = std::make_unique<Node>(NodeKind::For, "", s);
    expect_punct("(");
    node->add(at_declaration() ? declaration() : simple_statement());
    expect_punct(";");
    node->add(expression());
    expect_punct(";");
    node->add(simple_statement());
    expect_punct(")");
    node->add(statement());
    return node;
  }

  std::unique_ptr<Node> switch_stmt() {
    const SourceSpan s = here();
    ++pos_;
    auto node = std::make_unique<Node>(NodeKind::Switch, "", s);
    expect_punct("(");
    node->add(expression());
    expect_punct(")");
    expect_punct("{");
    while (!check_punct("}")) {
      const SourceSpan cs = here();
      std::unique_ptr<Node> arm;
      if (check_kw("case")) {
        ++pos_;
        bool negative = false;
        if (check_op("-")) {
          ++pos_;
          negative = true;
        }
        if (at_end() || peek().kind != TokenKind::IntLiteral) unexpected("integer case value");
        arm = std::make_unique<Node>(NodeKind::Case, canonical_int(toks_[pos_++].text, negative),
                                     cs);
      } else if (check_kw("default")) {
        ++pos_;
        arm = std::make_unique<Node>(NodeKind::Default, "", cs);
      } else {
        unexpected("'case', 'default' or '}'");
      }
      expect_punct(":");
      auto body = std::make_unique<Node>(NodeKind::Block, "", here());
      while (!check_kw("case") && !check_kw("default") && !check_punct("}")) {
        if (at_end()) unexpected("'}'");
        body->add(statement());
      }
      arm->add(std::move(body));
      node->add(std::move(arm));
    }
    expect_punct("}");
    return node;
  }

  std::unique_ptr<Node> return_stmt() {
    const SourceSpan s = here();
    ++pos_;
    auto node = std::make_unique<Node>(NodeKind::Return, "", s);
    if (!check_punct(";")) node->add(expression());
    expect_punct(";");
    return node;
  }

  // ---- expressions ---------------------------------------------------------
  std::unique_ptr<Node> expression(int min_prec = 1) {
    DepthGuard guard(*this);
    auto lhs = unary();
    for (;;) {
      const int prec = at_end() ? -1 : binary_precedence(peek());
      if (prec < min_prec) break;
      const Token& op = toks_[pos_++];
      auto rhs = expression(prec + 1);
      auto bin = std::make_unique<Node>(NodeKind::Binary, op.text, lhs->span);
      bin->add(std::move(lhs));
      bin->add(std::move(rhs));
      lhs = std::move(bin);
    }
    return lhs;
  }

  bool at_cast() const {
    if (!check_punct("(")) return false;
    const Token& t = peek(1);
    const bool type_tok =
        (t.kind == TokenKind::Keyword && (t.text == "int" || t.text == "float" || t.text == "bool")) ||
        (t.kind == TokenKind::Identifier && record_names_.count(t.text) > 0);
    return type_tok && peek(2).is(TokenKind::Punctuation, ")");
  }

  std::unique_ptr<Node> unary() {
    DepthGuard guard(*this);
    const SourceSpan s = here();
    if (check_op("-")) {
      ++pos_;
      if (!at_end() && (peek().kind == TokenKind::IntLiteral || peek().kind == TokenKind::FloatLiteral)) {
        return literal(/*negative=*/true, s);
      }
      auto node = std::make_unique<Node>(NodeKind::Unary, "-", s);
      node->add(unary());
      return node;
    }
    if (check_op("!")) {
      ++pos_;
      auto node = std::make_unique<Node>(NodeKind::Unary, "!", s);
      node->add(unary());
      return node;
    }
    if (at_cast()) {
      ++pos_;
      auto cast = std::make_unique<Node>(NodeKind::Cast, "", s);
      cast->type = type_spec();
      expect_punct(")");
      cast->add(unary());
      return cast;
    }
    return postfix();
  }

  std::unique_ptr<Node> literal(bool negative, SourceSpan s) {
    const Token& t = toks_[pos_++];
    if (t.kind == TokenKind::IntLiteral) {
      return std::make_unique<Node>(NodeKind::IntLit, canonical_int(t.text, negative), s);
    }
    // float: strip redundant leading zeros of the integer part and trailing
    // zeros of the fraction
    const auto dot = t.text.find('.');
    std::string whole = canonical_int(std::string_view(t.text).substr(0, dot), false);
    std::string frac = t.text.substr(dot + 1);
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    std::string text = whole + "." + frac;
    if (negative && text != "0.0") text.insert(text.begin(), '-');
    return std::make_unique<Node>(NodeKind::FloatLit, text, s);
  }

  std::unique_ptr<Node> postfix() {
    auto node = primary();
    for (;;) {
      const SourceSpan s = here();
      if (accept_punct("[")) {
        auto idx = std::make_unique<Node>(NodeKind::Index, "", node->span);
        idx->add(std::move(node));
        idx->add(expression());
        expect_punct("]");
        node = std::move(idx);
      } else if (accept_punct(".")) {
        const Token& field = expect_ident();
        auto f = std::make_unique<Node>(NodeKind::Field, field.text, s);
        f->span = node->span;
        f->add(std::move(node));
        node = std::move(f);
      } else {
        return node;
      }
    }
  }

  std::unique_ptr<Node> primary() {
    const SourceSpan s = here();
    if (at_end()) unexpected("expression");
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::IntLiteral:
      case TokenKind::FloatLiteral:
        return literal(false, s);
      case TokenKind::Keyword:
        if (t.text == "true" || t.text == "false") {
          ++pos_;
          return std::make_unique<Node>(NodeKind::BoolLit, t.text, s);
        }
        if (t.text == "null") {
          ++pos_;
          return std::make_unique<Node>(NodeKind::NullLit, "null", s);
        }
        break;
      case TokenKind::Identifier: {
        ++pos_;
        if (accept_punct("(")) {
          auto call = std::make_unique<Node>(NodeKind::Call, t.text, s);
          if (!check_punct(")")) {
            do {
              call->add(expression());
            } while (accept_punct(","));
          }
          expect_punct(")");
          return call;
        }
        return std::make_unique<Node>(NodeKind::Ident, t.text, s);
      }
      case TokenKind::Punctuation:
        if (t.text == "(") {
          ++pos_;
          auto inner = expression();
          expect_punct(")");
          return inner;
        }
        break;
      default:
        break;
    }
    unexpected("expression");
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::set<std::string, std::less<>> record_names_;
};

}  // namespace

ProgramAst parse_syntax(std::span<const Token> tokens) { return Parser(tokens).run(); }

ProgramAst parse(std::span<const Token> tokens) {
  ProgramAst program = parse_syntax(tokens);
  resolve(program);
  return program;
}

ProgramAst parse_source(std::string_view source) {
  const auto tokens = tokenize(source);
  return parse(tokens);
}

}  // namespace mfgnn::lang
