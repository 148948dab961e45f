#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "mfgnn/nn/model.hpp"
#include "mfgnn/tensor/init.hpp"

using namespace mfgnn;
using namespace mfgnn::nn;
using tensor::Rng;
using tensor::Tape;

namespace {

Matrix row(std::initializer_list<double> xs) {
  Matrix m(1, static_cast<tensor::Index>(xs.size()));
  tensor::Index i = 0;
  for (double x : xs) m(0, i++) = x;
  return m;
}

std::vector<const model::BlockAst*> blocks_of(const std::vector<const model::CodeGraph*>& gs) {
  std::vector<const model::BlockAst*> out;
  for (const auto* g : gs) {
    for (const auto& b : g->blocks) out.push_back(&b);
  }
  return out;
}

ModelDims small_dims(const model::Vocabulary& v) { return ModelDims{static_cast<int>(v.size()), 8, 12, 3, 2}; }

double elu(double x) { return x > 0 ? x : std::expm1(x); }

// Relabels blocks by `perm` (old id -> new id), keeping every edge.
model::CodeGraph permute_blocks(const model::CodeGraph& g, const std::vector<int>& perm) {
  model::CodeGraph out;
  out.label = g.label;
  out.blocks.resize(g.blocks.size());
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    auto& b = out.blocks[static_cast<std::size_t>(perm[i])];
    b = g.blocks[i];
    b.block = perm[i];
  }
  for (const auto& e : g.edges) {
    out.edges.push_back({perm[static_cast<std::size_t>(e.src)], perm[static_cast<std::size_t>(e.dst)], e.kind});
  }
  return out;
}

}  // namespace

TEST_SUITE("mfgnn") {

TEST_CASE("TBCNN position weights") {
  auto check = [](EtaWeights w, double t, double l, double r) {
    CHECK(w.t == doctest::Approx(t).epsilon(1e-15));
    CHECK(w.l == doctest::Approx(l).epsilon(1e-15));
    CHECK(w.r == doctest::Approx(r).epsilon(1e-15));
  };
  check(tbcnn_weights(3, 5, 2, 3), 0.5, 0.25, 0.375);
  check(tbcnn_weights(1, 5, 1, 1), 0, 0, 0);
  check(tbcnn_weights(4, 4, 1, 2), 1, 0, 1);
  // degenerate: single-level tree and only child
  check(tbcnn_weights(1, 1, 1, 1), 1, 0.5, 0.5);
  check(tbcnn_weights(2, 3, 1, 1), 0.5, 0.25, 0.375);
  // independent evaluation over a grid
  for (int dmax = 2; dmax <= 6; ++dmax) {
    for (int d = 1; d <= dmax; ++d) {
      for (int n = 2; n <= 4; ++n) {
        for (int p = 1; p <= n; ++p) {
          const double t = double(d - 1) / double(dmax - 1);
          const double l = t * double(p - 1) / double(n - 1);
          check(tbcnn_weights(d, dmax, p, n), t, l, t * (1 - l));
        }
      }
    }
  }
}

TEST_CASE("encoding flattens trees with one window per node") {
  const auto g = testing::graph_of(testing::read_fixture("motivating/faulty.mini"));
  const auto vocab = model::build_vocab(blocks_of({&g}));
  const auto e = encode(g, vocab);
  std::size_t nodes = 0;
  for (const auto& b : g.blocks) nodes += b.root.node_count();
  CHECK(e.nodes() == static_cast<int>(nodes));
  CHECK(e.eta.rows() == e.nodes());
  // each non-root node is a member of exactly one foreign window
  CHECK(e.window_member.size() == 2 * nodes - g.blocks.size());
  CHECK(e.bow.sum() == doctest::Approx(double(nodes)));
  CHECK(e.blocks == 5);
}

TEST_CASE("TBCNN local features") {
  const auto a = testing::graph_of(testing::read_fixture("bow/a_minus_b.mini"));
  const auto b = testing::graph_of(testing::read_fixture("bow/b_minus_a.mini"));
  const auto vocab = model::build_vocab(blocks_of({&a, &b}));
  const auto ea = encode(a, vocab);
  const auto eb = encode(b, vocab);
  MfgnnModel m(small_dims(vocab), {}, Task::Classify, 9);

  SUBCASE("zero embeddings and zero bias give a zero vector") {
    m.params().get("embedding").value.setZero();
    Tape t;
    CHECK(m.local_features(t, ea).value().isZero(0));
  }
  SUBCASE("child order matters") {
    Tape t;
    const Matrix la = m.local_features(t, ea).value();
    const Matrix lb = m.local_features(t, eb).value();
    CHECK((la.row(1) - lb.row(1)).cwiseAbs().maxCoeff() > 1e-9);
    CHECK(la.row(0) == lb.row(0));
  }
  SUBCASE("single-node window is tanh of the combined projection") {
    // Entry block of any graph is Block -> FunctionDecl; check the leaf against a hand evaluation.
    Tape t;
    const Matrix local = m.local_features(t, ea).value();
    const auto& P = m.params();
    const Matrix e_block = P.get("embedding").value.row(ea.token[0]);
    const Matrix e_decl = P.get("embedding").value.row(ea.token[1]);
    auto proj = [&](const Matrix& e, int node) {
      return Matrix(ea.eta(node, 0) * e * P.get("tbcnn.W_t").value + ea.eta(node, 1) * e * P.get("tbcnn.W_l").value +
                    ea.eta(node, 2) * e * P.get("tbcnn.W_r").value);
    };
    const Matrix y_root = (proj(e_block, 0) + proj(e_decl, 1)).array().tanh().matrix();
    const Matrix y_leaf = proj(e_decl, 1).array().tanh().matrix();
    const Matrix expected = y_root.cwiseMax(y_leaf);
    CHECK((local.row(0) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("attention coefficients") {
  SUBCASE("all-zero parameters give uniform weights") {
    const auto a = attention_coefficients(row({1, 2}), {row({3, 4}), row({5, 6}), row({7, 8})}, {0, 1, 0},
                                          Matrix::Zero(2, 1), Matrix::Zero(2, 7));
    for (double x : a) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
  SUBCASE("logits ln 3 and 0 give 0.75 and 0.25") {
    const auto a = attention_coefficients(row({1}), {row({std::log(3.0)}), row({0})}, {0, 0}, Matrix::Zero(1, 1),
                                          Matrix::Ones(1, 1));
    CHECK(a[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("negative logits pass through LeakyReLU") {
    const auto a = attention_coefficients(row({1}), {row({-5}), row({0})}, {0, 0}, Matrix::Zero(1, 1),
                                          Matrix::Ones(1, 1));
    const double e0 = std::exp(-5 * kLeakySlope);
    CHECK(a[0] == doctest::Approx(e0 / (e0 + 1)).epsilon(1e-14));
  }
  SUBCASE("one successor over two edge kinds gets two slots") {
    Tape t;
    DirectedEdges edges{{0, 0}, {1, 1}, {0, 6}};
    Matrix alpha;
    Rng rng(1);
    const Var keys = t.constant(tensor::uniform(2, 3, 1.0, rng));
    agn4d_aggregate(keys, edges, t.constant(tensor::uniform(3, 1, 1.0, rng)), t.constant(tensor::uniform(3, 7, 1.0, rng)),
                    2, &alpha);
    REQUIRE(alpha.rows() == 2);
    CHECK(alpha(0, 0) != alpha(1, 0));
    CHECK(alpha.sum() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("graph layer rules") {
  Rng rng(4);
  const int w = 3;
  Tape t;
  const Var h = t.constant(tensor::uniform(3, w, 1.0, rng));
  AgnLayerVars p{t.constant(tensor::uniform(w, w, 1.0, rng)), t.constant(tensor::uniform(w, w, 1.0, rng)),
                 t.constant(tensor::uniform(w, 1, 1.0, rng)), t.constant(tensor::uniform(w, 7, 1.0, rng))};
  const AblationConfig cfg;

  SUBCASE("no edges: identity") {
    CHECK(agn4d_layer(h, {}, {}, p, cfg).value() == h.value());
  }
  SUBCASE("zero key weights: identity on any graph") {
    AgnLayerVars z = p;
    z.w_key_o = t.constant(Matrix::Zero(w, w));
    z.w_key_r = t.constant(Matrix::Zero(w, w));
    const DirectedEdges e{{0, 1, 0}, {1, 2, 2}, {1, 0, 6}};
    const DirectedEdges r{{1, 2, 2}, {0, 1, 0}, {1, 0, 6}};
    CHECK(agn4d_layer(h, e, r, z, cfg).value() == h.value());
  }
  SUBCASE("single successor: alpha = 1 and h_o = ELU(k_v)") {
    const DirectedEdges e{{0}, {2}, {0}};
    LayerTrace trace;
    const Matrix out = agn4d_layer(h, e, {}, p, cfg, &trace).value();
    CHECK(trace.alpha_original(0, 0) == 1.0);
    const Matrix k_v = h.value().row(2) * p.w_key_o.value();
    for (int j = 0; j < w; ++j) CHECK(out(0, j) == doctest::Approx(elu(k_v(0, j)) + h.value()(0, j)).epsilon(1e-14));
    CHECK(out.row(1) == h.value().row(1));
  }
  SUBCASE("identical successor keys and kinds: alpha = 1/2 each") {
    Matrix same = tensor::uniform(3, w, 1.0, rng);
    same.row(2) = same.row(1);
    const Var hs = t.constant(same);
    LayerTrace trace;
    agn4d_layer(hs, DirectedEdges{{0, 0}, {1, 2}, {3, 3}}, {}, p, cfg, &trace);
    CHECK(trace.alpha_original(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(trace.alpha_original(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("concatenation doubles the width") {
    AblationConfig c;
    c.combine = Combine::Concat;
    CHECK(agn4d_layer(h, {}, {}, p, c).cols() == 2 * w);
  }
  SUBCASE("width mismatch is a ShapeError") {
    AgnLayerVars bad = p;
    bad.w_key_o = t.constant(Matrix::Zero(w + 1, w + 1));
    CHECK_THROWS_AS(agn4d_layer(h, {}, {}, bad, cfg), tensor::ShapeError);
  }
}

TEST_CASE("GCN sum on the diamond") {
  Tape t;
  // 0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3 with all-ones keys
  const DirectedEdges e{{0, 0, 1, 2}, {1, 2, 3, 3}, {0, 0, 0, 0}};
  const Matrix h = gcn_aggregate(t.constant(Matrix::Ones(4, 2)), e, 4).value();
  CHECK(h.row(0) == row({2, 2}));
  CHECK(h.row(1) == row({1, 1}));
  CHECK(h.row(2) == row({1, 1}));
  CHECK(h.row(3) == row({0, 0}));
}

TEST_CASE("fusion and pooling") {
  Rng rng(2);
  Tape t;
  const Matrix local = tensor::uniform(4, 3, 1.0, rng);
  const Matrix ctx = tensor::uniform(4, 3, 1.0, rng);
  const Matrix v = fuse_and_pool(t.constant(local), t.constant(ctx)).value();
  CHECK(v == (local + ctx).colwise().maxCoeff());
  CHECK(fuse_and_pool(t.constant(local), t.constant(Matrix::Zero(4, 3))).value() == local.colwise().maxCoeff());
  const Matrix one = fuse_and_pool(t.constant(local.topRows(1)), t.constant(ctx.topRows(1))).value();
  CHECK(one == local.topRows(1) + ctx.topRows(1));
  Matrix shuffled(4, 3);
  shuffled << local.row(2), local.row(0), local.row(3), local.row(1);
  Matrix shuffled_ctx(4, 3);
  shuffled_ctx << ctx.row(2), ctx.row(0), ctx.row(3), ctx.row(1);
  CHECK(fuse_and_pool(t.constant(shuffled), t.constant(shuffled_ctx)).value() == v);
  CHECK_THROWS_AS(fuse_and_pool(t.constant(local), t.constant(ctx.leftCols(2))), tensor::ShapeError);
}

TEST_CASE("classifier and clone heads") {
  Rng rng(6);
  const Matrix v = tensor::uniform(1, 5, 1.0, rng);
  SUBCASE("zero weights give uniform probabilities") {
    const auto p = classify(v, Matrix::Zero(5, 4), Matrix::Zero(1, 4));
    for (double x : p) CHECK(x == 0.25);
  }
  SUBCASE("probabilities sum to one; argmax is shift invariant") {
    const Matrix w = tensor::uniform(5, 3, 1.0, rng);
    const auto p = classify(v, w, Matrix::Zero(1, 3));
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    const auto q = classify(v, w, Matrix::Constant(1, 3, 7.0));
    CHECK(std::max_element(p.begin(), p.end()) - p.begin() == std::max_element(q.begin(), q.end()) - q.begin());
  }
  SUBCASE("two classes reduce to sigmoid of the logit difference") {
    const Matrix w = tensor::uniform(5, 2, 1.0, rng);
    const Matrix b = row({0.3, -0.2});
    const Matrix z = v * w + b;
    CHECK(classify(v, w, b)[1] == doctest::Approx(tensor::sigmoid(z(0, 1) - z(0, 0))).epsilon(1e-14));
  }
  SUBCASE("clone score") {
    const Matrix u = tensor::uniform(1, 5, 1.0, rng);
    const Matrix w_o = tensor::uniform(5, 1, 1.0, rng);
    const Matrix b_o = row({0.4});
    CHECK(clone_score(v, v, w_o, b_o) == tensor::sigmoid(0.4));
    CHECK(clone_score(v, u, w_o, b_o) == clone_score(u, v, w_o, b_o));
    const double zero_bias = clone_score(v, u, w_o, Matrix::Zero(1, 1));
    const double doubled = clone_score(v, u, 2 * w_o, Matrix::Zero(1, 1));
    CHECK(std::abs(doubled - 0.5) > std::abs(zero_bias - 0.5));
  }
}

TEST_CASE("ablation configuration text and names") {
  const AblationConfig def;
  CHECK(def.name() == "A+C+D+M");
  CHECK(AblationConfig::parse("") == def);
  CHECK(AblationConfig::parse(def.to_text()) == def);
  const auto c = AblationConfig::parse("# variant\nblock_repr = bow\nedges=control\nedge_typing=single\n");
  CHECK(c.name() == "B+C+S");
  CHECK(AblationConfig::from_name("B+C+S") == c);
  for (const char* n : {"A+C+D+M", "A+C+S", "A+D+S", "A+C+M", "B+C+D+M", "A+C+D+M/concat", "A+C+D+M/gcn"}) {
    CHECK(AblationConfig::from_name(n).name() == n);
    CHECK(AblationConfig::parse(AblationConfig::from_name(n).to_text()).name() == n);
  }
  CHECK_THROWS_AS(AblationConfig::parse("combine=concat\naggregator=gcn"), ConfigError);
  CHECK_THROWS_AS(AblationConfig::parse("colour=red"), ConfigError);
  CHECK_THROWS_AS(AblationConfig::parse("edges=all"), ConfigError);
  CHECK_THROWS_AS(AblationConfig::from_name("A+M"), ConfigError);
  CHECK_THROWS_AS(AblationConfig::from_name("C+D+M"), ConfigError);
  CHECK(edge_kind_columns(EdgeTyping::Single) == 1);
  CHECK(edge_kind_columns(EdgeTyping::Multi) == 7);
}

TEST_CASE("edge selection per configuration") {
  const auto g = testing::graph_of(testing::read_fixture("motivating/faulty.mini"));
  const auto both = select_edges(g.edges, {}, false);
  CHECK(both.size() == g.edges.size());
  const auto control = select_edges(g.edges, AblationConfig::from_name("A+C+M"), false);
  const auto flow = select_edges(g.edges, AblationConfig::from_name("A+D+M"), false);
  CHECK(control.size() + flow.size() == g.edges.size());
  for (int k : flow.kind) CHECK(k == static_cast<int>(ir::EdgeKind::DataFlow));
  const auto single = select_edges(g.edges, AblationConfig::from_name("A+C+D+S"), true);
  for (int k : single.kind) CHECK(k == 0);
  CHECK(single.src == both.nbr);
}

TEST_CASE("model forward properties") {
  const auto faulty = testing::graph_of(testing::read_fixture("motivating/faulty.mini"));
  const auto fixed = testing::graph_of(testing::read_fixture("motivating/fixed.mini"));
  const auto vocab = model::build_vocab(blocks_of({&faulty, &fixed}));
  const auto ef = encode(faulty, vocab);
  const auto ex = encode(fixed, vocab);
  const ModelDims dims = small_dims(vocab);

  SUBCASE("parameters are per layer and never shared") {
    const auto shapes = parameter_shapes(dims, {}, Task::Classify);
    std::set<std::string> names;
    for (const auto& [n, s] : shapes) CHECK(names.insert(n).second);
    CHECK(names.count("agn4d.3.P_dst") == 1);
    CHECK(names.count("agn4d.4.P_dst") == 0);
    CHECK(program_width(dims, AblationConfig::from_name("A+C+D+M/concat")) == dims.hidden * 8);
  }
  SUBCASE("the default config is the named full model") {
    MfgnnModel a(dims, {}, Task::Classify, 42);
    MfgnnModel b(dims, AblationConfig::from_name("A+C+D+M"), Task::Classify, 42);
    CHECK(a.program_vector_value(ef) == b.program_vector_value(ef));
  }
  SUBCASE("motivating pair is discriminated") {
    MfgnnModel m(dims, {}, Task::Classify, 42);
    CHECK((m.program_vector_value(ef) - m.program_vector_value(ex)).cwiseAbs().maxCoeff() > 1e-6);
  }
  SUBCASE("attention sums to one in every layer and direction") {
    MfgnnModel m(dims, {}, Task::Classify, 42);
    Tape t;
    ForwardTrace trace;
    m.program_vector(t, ef, &trace);
    REQUIRE(trace.layers.size() == 3);
    for (const auto& layer : trace.layers) {
      for (const auto* pair : {&layer.original, &layer.reverse}) {
        const Matrix& alpha = pair == &layer.original ? layer.alpha_original : layer.alpha_reverse;
        std::vector<double> total(static_cast<std::size_t>(ef.blocks), 0.0);
        for (std::size_t k = 0; k < pair->size(); ++k) total[static_cast<std::size_t>(pair->src[k])] += alpha(static_cast<tensor::Index>(k), 0);
        std::set<int> sources(pair->src.begin(), pair->src.end());
        for (int s : sources) CHECK(std::abs(total[static_cast<std::size_t>(s)] - 1.0) < 1e-12);
      }
    }
  }
  SUBCASE("relabeling blocks leaves the output unchanged") {
    MfgnnModel m(dims, {}, Task::Classify, 5);
    const auto permuted = encode(permute_blocks(faulty, {3, 0, 4, 1, 2}), vocab);
    const auto p = m.classify(ef);
    const auto q = m.classify(permuted);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-12));
  }
  SUBCASE("every ablation variant runs and produces its width") {
    for (const auto& name : {"A+C+S", "A+D+S", "A+C+M", "B+C+D+M", "A+C+D+M/concat", "A+C+D+M/gcn"}) {
      const auto cfg = AblationConfig::from_name(name);
      MfgnnModel m(dims, cfg, Task::Classify, 1);
      CHECK(m.program_vector_value(ef).cols() == program_width(dims, cfg));
    }
  }
  SUBCASE("adopting parameters checks their shapes") {
    MfgnnModel m(dims, {}, Task::Classify, 1);
    CHECK_NOTHROW(MfgnnModel(dims, {}, Task::Classify, m.params().clone()));
    ModelDims wider = dims;
    wider.hidden += 1;
    CHECK_THROWS_AS(MfgnnModel(wider, {}, Task::Classify, m.params().clone()), tensor::ShapeError);
    CHECK_THROWS_AS(MfgnnModel(dims, {}, Task::Clone, m.params().clone()), ConfigError);
  }
  SUBCASE("seeded initialization is deterministic") {
    MfgnnModel a(dims, {}, Task::Clone, 77);
    MfgnnModel b(dims, {}, Task::Clone, 77);
    CHECK(a.clone_score(ef, ex) == b.clone_score(ef, ex));
    CHECK(a.clone_score(ef, ex) == a.clone_score(ex, ef));
  }
}

}  // TEST_SUITE
