#include <doctest.h>

#include <cctype>
#include <functional>

#include <json.hpp>

#include "fixtures.hpp"
#include "mfgnn/model/block_ast.hpp"
#include "mfgnn/model/code_graph.hpp"
#include "mfgnn/model/serialize.hpp"
#include "mfgnn/model/vocabulary.hpp"
#include "mfgnn/train/dataset.hpp"

using namespace mfgnn;
using model::TreeNode;
using Strings = std::vector<std::string>;

namespace {

void walk(const TreeNode& n, const std::function<void(const TreeNode&)>& f) {
  f(n);
  for (const auto& c : n.children) walk(c, f);
}

std::vector<const model::BlockAst*> blocks_of(const model::CodeGraph& g) {
  std::vector<const model::BlockAst*> out;
  for (const auto& b : g.blocks) out.push_back(&b);
  return out;
}

bool is_basic_type_label(const std::string& s) { return s == "int" || s == "float" || s == "bool"; }

}  // namespace

TEST_SUITE("code_model") {

TEST_CASE("CamelCase splitting") {
  CHECK(model::split_camel("ArrayList") == Strings{"Array", "List"});
  CHECK(model::split_camel("x") == Strings{"x"});
  CHECK(model::split_camel("HTTPServer") == Strings{"HTTP", "Server"});
  CHECK(model::split_camel("NO_FIELDS") == Strings{"NO", "FIELDS"});
  CHECK(model::split_camel("__a__b") == Strings{"a", "b"});
  CHECK(model::split_camel("getX2Value") == Strings{"get", "X2", "Value"});
}

TEST_CASE("constants decompose digit by digit") {
  CHECK(model::decompose_constant("456") == Strings{"4", "5", "6"});
  CHECK(model::decompose_constant("0") == Strings{"0"});
  CHECK(model::decompose_constant("-1.5") == Strings{"<sign>", "1", "<point>", "5"});
}

TEST_CASE("motivating example block trees") {
  const auto faulty = testing::graph_of(testing::read_fixture("motivating/faulty.mini"));
  const auto fixed = testing::graph_of(testing::read_fixture("motivating/fixed.mini"));
  REQUIRE(faulty.block_count() == 5);

  SUBCASE("faulty return is ReturnOp over NULL") {
    const TreeNode& ret = faulty.blocks[2].root.children.at(0);
    CHECK(ret.label == "ReturnOp");
    CHECK(ret.node_count() == 2);
    CHECK(ret.children.at(0).label == "NULL");
  }
  SUBCASE("fixed return carries the field reference and its user type subtokens") {
    const TreeNode& ret = fixed.blocks[2].root.children.at(0);
    CHECK(ret.label == "ReturnOp");
    const TreeNode& ref = ret.children.at(0);
    CHECK(ref.label == "FieldRef");
    const std::size_t n = ref.children.size();
    REQUIRE(n >= 2);
    CHECK(ref.children[n - 2].label == "Field");
    CHECK(ref.children[n - 1].label == "List");
  }
  SUBCASE("entry block is a Block over a FunctionDecl marker") {
    const TreeNode& root = faulty.blocks[0].root;
    CHECK(root.label == "Block");
    REQUIRE(root.children.size() == 1);
    CHECK(root.children[0].label == "FunctionDecl");
  }
  SUBCASE("the variants differ in exactly one block and share all edges") {
    int differing = 0;
    for (std::size_t b = 0; b < faulty.block_count(); ++b) {
      differing += model::structurally_equal(faulty.blocks[b].root, fixed.blocks[b].root) ? 0 : 1;
    }
    CHECK(differing == 1);
    CHECK(faulty.edges == fixed.edges);
  }
  SUBCASE("graph has control and dataflow edges") {
    CHECK(faulty.count(ir::EdgeKind::CondTrue) == 1);
    CHECK(faulty.count(ir::EdgeKind::CondFalse) == 1);
    CHECK(faulty.count(ir::EdgeKind::SeqExec) >= 1);
    CHECK(faulty.count(ir::EdgeKind::DataFlow) >= 1);
  }
}

TEST_CASE("augmentation invariants over the corpus") {
  for (const auto& path : testing::corpus_files()) {
    const auto g = train::load_program(path);
    for (const auto& b : g.blocks) {
      CHECK(b.root.label == "Block");
      CHECK(!b.root.children.empty());
      walk(b.root, [&](const TreeNode& n) {
        CHECK(n.augmented);
        if (n.label == "Cast") {
          REQUIRE(n.children.size() == 3);
          CHECK(n.children[0].label == "SrcType");
          CHECK(n.children[1].label == "DstType");
        }
        if (n.label == "Const") {
          for (const auto& c : n.children) {
            const bool digit = c.label.size() == 1 && std::isdigit(static_cast<unsigned char>(c.label[0]));
            CHECK((digit || c.label == model::kSignLeaf || c.label == model::kPointLeaf || c.label == "true" ||
                   c.label == "false"));
            CHECK(c.children.empty());
          }
          if (!n.children.empty() && n.children[0].label != model::kSignLeaf) {
            for (const auto& c : n.children) CHECK(c.label != model::kSignLeaf);
          }
        }
        if (n.label == "Local" && !n.children.empty() && is_basic_type_label(n.children.back().label)) {
          int type_leaves = 0;
          for (const auto& c : n.children) type_leaves += is_basic_type_label(c.label) ? 1 : 0;
          CHECK(type_leaves == 1);
        }
      });
    }
  }
}

TEST_CASE("basic-typed variable uses end with one type leaf; casts carry both types") {
  const auto g = testing::graph_of("int f(int a) { float z = (float) a; return a; }");
  const TreeNode& def = g.blocks[1].root.children.at(0);
  CHECK(model::render(def) ==
        "DefStmt\n  Local\n    z\n    float\n  Cast\n    SrcType\n      int\n    DstType\n      float\n"
        "    Local\n      a\n      int\n");
}

TEST_CASE("negative literals lead with the sign leaf") {
  const auto g = testing::graph_of("int f() { return -45; }");
  CHECK(model::labels(g.blocks[1].root) == Strings{"Block", "ReturnOp", "Const", "<sign>", "4", "5"});
}

TEST_CASE("augmenting twice is rejected") {
  const auto g = testing::graph_of("int f(int a) { return a; }");
  TreeNode copy = g.blocks[1].root;
  CHECK_THROWS_AS(model::augment(copy), std::logic_error);
}

TEST_CASE("vocabulary") {
  SUBCASE("closure of the labels present") {
    const auto g = testing::graph_of("int f(int a, int b) { int c = a + b; return c; }");
    const model::BlockAst* body = &g.blocks[1];
    const auto v = model::build_vocab({body});
    for (const char* tok : {"Block", "DefStmt", "Local", "BOp", "+", "int", "a", "b", "c", "<UNK>"}) {
      CHECK(v.contains(tok));
    }
    CHECK(v.frozen());
    CHECK(v.index("Nope") == model::Vocabulary::kUnkIndex);
  }
  SUBCASE("empty corpus holds only UNK") {
    const auto v = model::build_vocab({});
    CHECK(v.size() == 1);
    CHECK(v.token(0) == "<UNK>");
  }
  SUBCASE("index/token round trip and file format") {
    const auto g = testing::graph_of(testing::read_fixture("clone/p06.mini"));
    const auto v = model::build_vocab(blocks_of(g));
    for (int i = 0; i < static_cast<int>(v.size()); ++i) CHECK(v.index(v.token(i)) == i);
    const std::string text = v.serialize();
    CHECK(text.rfind("<UNK>\n", 0) == 0);
    CHECK(model::Vocabulary::deserialize(text) == v);
    CHECK_THROWS_AS(model::Vocabulary::deserialize("a\nb\n"), model::FormatError);
    CHECK_THROWS_AS(model::Vocabulary::deserialize("<UNK>\na\na\n"), model::FormatError);
  }
  SUBCASE("open vocabulary grows, frozen does not") {
    model::Vocabulary v;
    CHECK(v.add("x") == 1);
    CHECK(v.add("x") == 1);
    v.freeze();
    CHECK(v.add("y") == model::Vocabulary::kUnkIndex);
    CHECK(v.size() == 2);
  }
}

TEST_CASE("straight-line program graph") {
  const auto g = testing::graph_of("int f(int a) { int b = a + 1; return b; }");
  CHECK(g.block_count() == 3);
  CHECK(g.count(ir::EdgeKind::SeqExec) == 2);
  CHECK(g.edges.size() == 2);
}

TEST_CASE("validation rejects dangling edges and missing trees") {
  auto g = testing::graph_of("int f(int a) { return a; }");
  model::validate(g);
  auto dangling = g;
  dangling.edges.push_back({0, 7, ir::EdgeKind::SeqExec});
  CHECK_THROWS_AS(model::validate(dangling), model::GraphError);
  auto empty_tree = g;
  empty_tree.blocks[1].root = TreeNode();
  CHECK_THROWS_AS(model::validate(empty_tree), model::GraphError);
  auto misnumbered = g;
  misnumbered.blocks[1].block = 5;
  CHECK_THROWS_AS(model::validate(misnumbered), model::GraphError);
}

TEST_CASE("serialization round trip over the corpus") {
  for (const auto& path : testing::corpus_files()) {
    CAPTURE(path.string());
    const auto g = train::load_program(path, 1);
    const auto back = model::deserialize(model::serialize(g));
    CHECK(model::structurally_equal(g, back));
    CHECK(back.label == 1);
    CHECK(model::serialize(back) == model::serialize(g));
  }
}

TEST_CASE("deserialization rejects malformed documents") {
  const auto g = testing::graph_of("int f(int a) { if (a > 0) { return 1; } return 0; }");
  auto doc = nlohmann::json::parse(model::serialize(g));
  CHECK_NOTHROW(model::deserialize(doc.dump()));

  auto wrong_version = doc;
  wrong_version["version"] = 2;
  CHECK_THROWS_AS(model::deserialize(wrong_version.dump()), model::FormatError);

  auto bad_kind = doc;
  bad_kind["edges"][0]["kind"] = "ReturnFlow";
  CHECK_THROWS_AS(model::deserialize(bad_kind.dump()), model::FormatError);

  auto missing = doc;
  missing.erase("blocks");
  CHECK_THROWS_AS(model::deserialize(missing.dump()), model::FormatError);

  auto dangling = doc;
  dangling["edges"][0]["dst"] = 99;
  CHECK_THROWS_AS(model::deserialize(dangling.dump()), model::FormatError);

  CHECK_THROWS_AS(model::deserialize("not json"), model::FormatError);
  CHECK_THROWS_AS(model::deserialize("[]"), model::FormatError);
}

TEST_CASE("bag-of-words block features") {
  const auto a = testing::graph_of(testing::read_fixture("bow/a_minus_b.mini"));
  const auto b = testing::graph_of(testing::read_fixture("bow/b_minus_a.mini"));
  const auto vocab = model::build_vocab(blocks_of(a));
  SUBCASE("counts per label") {
    const auto f = model::bow_block_features(a.blocks[1], vocab);
    CHECK(f.size() == vocab.size());
    CHECK(f[static_cast<std::size_t>(vocab.index("int"))] == 2.0);
    CHECK(f[static_cast<std::size_t>(vocab.index("BOp"))] == 1.0);
  }
  SUBCASE("equal label multisets give identical vectors despite different trees") {
    CHECK_FALSE(model::structurally_equal(a.blocks[1].root, b.blocks[1].root));
    CHECK(model::bow_block_features(a.blocks[1], vocab) == model::bow_block_features(b.blocks[1], vocab));
  }
  SUBCASE("synthetic blocks only count their marker") {
    const auto f = model::bow_block_features(a.blocks[0], vocab);
    double total = 0;
    for (double x : f) total += x;
    CHECK(total == 2.0);  // Block + FunctionDecl
  }
}

}  // TEST_SUITE
