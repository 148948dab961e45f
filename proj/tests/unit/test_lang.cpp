#include <doctest.h>

#include <functional>
#include <string>

#include "fixtures.hpp"
#include "mfgnn/lang/errors.hpp"
#include "mfgnn/lang/parser.hpp"
#include "mfgnn/lang/printer.hpp"
#include "mfgnn/lang/token.hpp"

using namespace mfgnn;
using lang::NodeKind;
using lang::TokenKind;

namespace {

void walk(const lang::Node& n, const std::function<void(const lang::Node&)>& f) {
  f(n);
  for (const auto& c : n.children) walk(*c, f);
}

}  // namespace

TEST_SUITE("lang") {

TEST_CASE("tokenize splits keywords, identifiers and punctuation") {
  const auto toks = lang::tokenize("int x;");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].is(TokenKind::Keyword, "int"));
  CHECK(toks[1].is(TokenKind::Identifier, "x"));
  CHECK(toks[2].is(TokenKind::Punctuation, ";"));
  CHECK(toks[1].line == 1);
  CHECK(toks[1].column == 5);
}

TEST_CASE("tokenize of empty input is empty") { CHECK(lang::tokenize("").empty()); }

TEST_CASE("illegal character raises LexError with its position") {
  try {
    lang::tokenize("int @x;");
    FAIL("expected LexError");
  } catch (const lang::LexError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("tokens reproduce the non-comment source") {
  const std::string src = "int f(int a) { // comment\n  return a*2 + 1; /* block */ }\n";
  std::string joined;
  for (const auto& t : lang::tokenize(src)) {
    CHECK(!t.text.empty());
    CHECK(t.line >= 1);
    CHECK(t.column >= 1);
    joined += t.text;
  }
  CHECK(joined == "intf(inta){returna*2+1;}");
}

TEST_CASE("literals keep digits only; the sign is an operator") {
  const auto toks = lang::tokenize("-12 3.50");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].kind == TokenKind::Operator);
  CHECK(toks[1].is(TokenKind::IntLiteral, "12"));
  CHECK(toks[2].kind == TokenKind::FloatLiteral);
}

TEST_CASE("minimal program parses to one function returning a literal") {
  const auto p = lang::parse_source("int main() { return 0; }");
  REQUIRE(p.functions().size() == 1);
  const auto& body = lang::function_body(*p.functions()[0]);
  REQUIRE(body.children.size() == 1);
  CHECK(body.children[0]->kind == NodeKind::Return);
  CHECK(body.children[0]->children[0]->kind == NodeKind::IntLit);
  CHECK(body.children[0]->children[0]->text == "0");
}

TEST_CASE("if/else yields an If node with two branches") {
  const auto p = lang::parse_source("int f(int a){ if(a<0) return 0; else return a; }");
  const auto& stmt = *lang::function_body(*p.functions()[0]).children[0];
  CHECK(stmt.kind == NodeKind::If);
  CHECK(stmt.children.size() == 3);
}

TEST_CASE("resolution errors") {
  CHECK_THROWS_AS(lang::parse_source("int f(){ return g(); }"), lang::ResolveError);
  CHECK_THROWS_AS(lang::parse_source("int f(){ return y; }"), lang::ResolveError);
  CHECK_THROWS_AS(lang::parse_source("int f(int a){ int a = 1; return a; }"), lang::ResolveError);
  CHECK_THROWS_AS(lang::parse_source("int g(int a){ return a; } int f(){ return g(1, 2); }"),
                  lang::ResolveError);
  CHECK_THROWS_AS(lang::parse_source("int f(){ int x = 1; x + 1; return x; }"), lang::ResolveError);
  CHECK_THROWS_AS(lang::parse_source("type point { int x; } int f(){ return 0; }"), lang::ResolveError);
  CHECK_THROWS_AS(lang::parse_source("int f(int a){ switch (a) { case 1: a = 2; case 1: a = 3; } return a; }"),
                  lang::ResolveError);
}

TEST_CASE("parse errors carry the offending position") {
  try {
    lang::parse_source("int f() {\n  return 1 +;\n}");
    FAIL("expected ParseError");
  } catch (const lang::ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 13);
  }
  CHECK_THROWS_AS(lang::parse_source("int f() { return 1; "), lang::ParseError);
}

TEST_CASE("nesting beyond the fixed limit is rejected") {
  std::string expr(600, '(');
  expr += "1";
  expr += std::string(600, ')');
  CHECK_THROWS_AS(lang::parse_source("int f() { return " + expr + "; }"), lang::ParseError);
}

TEST_CASE("diagnostic format is file:line:col: severity: message") {
  CHECK(lang::format_diagnostic("a.mini", 3, 7, "error", "bad") == "a.mini:3:7: error: bad");
  const lang::ParseError err("oops", 2, 4);
  CHECK(lang::format_diagnostic("b.mini", err) == "b.mini:2:4: error: oops");
}

TEST_CASE("pretty-print round trip over the fixture corpus") {
  for (const auto& path : testing::corpus_files()) {
    CAPTURE(path.string());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto first = lang::parse_source(ss.str());
    const std::string printed = lang::print_program(first);
    const auto second = lang::parse_source(printed);
    CHECK(lang::structurally_equal(first, second));
    CHECK(lang::print_program(second) == printed);
  }
}

TEST_CASE("round trip over tricky constructs") {
  const std::string src = R"(
type PointList { int n; float data[]; }
float g(PointList p, int xs[]) {
  float acc = 0.0;
  for (int i = 0; i < p.n && xs[i] != -3; i = i + 1) {
    acc = acc + p.data[i] * (float) xs[i] - -1.5;
  }
  while (!(acc > 10.0) || acc < 0.0) { acc = acc / 2.0; }
  switch (p.n % 3) { case 0: acc = 1.0; case -1: { acc = 2.0; } default: acc = (float) (p.n - (1 - 2)); }
  return acc;
}
)";
  const auto a = lang::parse_source(src);
  const auto b = lang::parse_source(lang::print_program(a));
  CHECK(lang::structurally_equal(a, b));
}

TEST_CASE("parsing is deterministic") {
  const std::string src = testing::read_fixture("clone/p10.mini");
  CHECK(lang::print_program(lang::parse_source(src)) == lang::print_program(lang::parse_source(src)));
  CHECK(lang::structurally_equal(lang::parse_source(src), lang::parse_source(src)));
}

TEST_CASE("every expression is typed and every node has one parent") {
  for (const auto& path : testing::corpus_files()) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto p = lang::parse_source(ss.str());
    CHECK(p.root().parent == nullptr);
    walk(p.root(), [&](const lang::Node& n) {
      if (lang::is_expression(n.kind)) CHECK(n.type.has_value());
      for (const auto& c : n.children) CHECK(c->parent == &n);
      if (n.kind == NodeKind::Ident) CHECK(n.decl != nullptr);
    });
  }
}

}  // TEST_SUITE
