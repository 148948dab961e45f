#include "mfgnn/nn/gradcheck_suite.hpp"

#include <chrono>

#include "mfgnn/lang/parser.hpp"
#include "mfgnn/model/code_graph.hpp"
#include "mfgnn/nn/model.hpp"
#include "mfgnn/tensor/init.hpp"

namespace mfgnn::nn {

using tensor::ParamStore;
using tensor::Tape;

namespace {

constexpr int kEmbed = 4;
constexpr int kHidden = 5;

constexpr const char* kFixtureSource = R"(
type FieldList { int n; }
type Document { FieldList fields; FieldList noFields; }
FieldList getFields(Document doc) {
  FieldList result = doc.fields;
  if (result.n == 0) {
    return doc.noFields;
  }
  return result;
}
int count(int xs[], int n) {
  int total = 0;
  for (int i = 0; i < n; i = i + 1) {
    switch (xs[i]) {
      case 0: total = total + 1;
      case -1: { total = total - 2; }
      default: total = (int) (1.5 * (float) total);
    }
  }
  return total;
}
)";

/// Diamond with a typed dataflow shortcut: 0->1 T, 0->2 F, 1->3, 2->3, 0 ~> 3.
std::vector<ir::FlowEdge> diamond_edges() {
  using ir::EdgeKind;
  return {{0, 1, EdgeKind::CondTrue},
          {0, 2, EdgeKind::CondFalse},
          {1, 3, EdgeKind::SeqExec},
          {2, 3, EdgeKind::SeqExec},
          {0, 3, EdgeKind::DataFlow}};
}

struct Fixture {
  model::CodeGraph graph;
  model::Vocabulary vocab;
  EncodedGraph encoded;
};

Fixture make_fixture() {
  const lang::ProgramAst ast = lang::parse_source(kFixtureSource);
  Fixture f{model::build_code_graph(ast, 1), {}, {}};
  std::vector<const model::BlockAst*> corpus;
  for (const auto& b : f.graph.blocks) corpus.push_back(&b);
  f.vocab = model::build_vocab(corpus);
  f.encoded = encode(f.graph, f.vocab);
  return f;
}

/// Weighted sum with fixed random weights, so every output entry matters.
Var probe(Tape& tape, Var out, const Matrix& weights) { return tensor::sum(tensor::mul(out, tape.constant(weights))); }

template <typename Fn>
GradCheckRow timed(std::string name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  GradCheckRow row{std::move(name), fn(), 0.0};
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

std::vector<GradCheckRow> run_gradcheck_suite(std::uint64_t seed, double h) {
  tensor::Rng rng(seed);
  const Fixture fx = make_fixture();
  const EncodedGraph& g = fx.encoded;
  const int vocab = static_cast<int>(fx.vocab.size());
  std::vector<GradCheckRow> rows;

  // TBCNN over every block tree of the fixture program.
  {
    ParamStore ps;
    ps.add("embedding", tensor::uniform<double>(vocab, kEmbed, 1.0, rng));
    ps.add("W_t", tensor::glorot_uniform<double>(kEmbed, kHidden, rng));
    ps.add("W_l", tensor::glorot_uniform<double>(kEmbed, kHidden, rng));
    ps.add("W_r", tensor::glorot_uniform<double>(kEmbed, kHidden, rng));
    ps.add("b", tensor::uniform<double>(1, kHidden, 0.1, rng));
    const Matrix r = tensor::uniform<double>(g.blocks, kHidden, 1.0, rng);
    rows.push_back(timed("tbcnn", [&] {
      return tensor::finite_diff_check(
          [&](Tape& t) {
            TbcnnVars p{t.param(ps.get("embedding")), t.param(ps.get("W_t")), t.param(ps.get("W_l")),
                        t.param(ps.get("W_r")), t.param(ps.get("b"))};
            return probe(t, tbcnn_forward(g, p), r);
          },
          ps, h);
    }));
  }

  // Three stacked AGN4D layers on the diamond; each row checks one layer's
  // weights (and, for layer 1, the input features).
  {
    const auto edges = diamond_edges();
    const AblationConfig config;
    const DirectedEdges original = select_edges(edges, config, false);
    const DirectedEdges reverse = select_edges(edges, config, true);
    const int kinds = edge_kind_columns(config.edge_typing);
    ParamStore input;
    input.add("H0", tensor::uniform<double>(4, kHidden, 1.0, rng));
    std::vector<ParamStore> layers(3);
    for (auto& ps : layers) {
      ps.add("W_key_o", tensor::glorot_uniform<double>(kHidden, kHidden, rng));
      ps.add("W_key_r", tensor::glorot_uniform<double>(kHidden, kHidden, rng));
      ps.add("P_src", tensor::uniform<double>(kHidden, 1, 1.0, rng));
      ps.add("P_dst", tensor::uniform<double>(kHidden, kinds, 1.0, rng));
    }
    const Matrix r = tensor::uniform<double>(4, kHidden, 1.0, rng);
    for (int upto = 1; upto <= 3; ++upto) {
      auto loss = [&, upto](Tape& t) {
        Var hv = t.param(input.get("H0"));
        for (int l = 0; l < upto; ++l) {
          ParamStore& ps = layers[static_cast<std::size_t>(l)];
          AgnLayerVars p{t.param(ps.get("W_key_o")), t.param(ps.get("W_key_r")), t.param(ps.get("P_src")),
                         t.param(ps.get("P_dst"))};
          hv = agn4d_layer(hv, original, reverse, p, config);
        }
        return probe(t, hv, r);
      };
      rows.push_back(timed("agn4d layer " + std::to_string(upto), [&] {
        tensor::GradCheckResult res = tensor::finite_diff_check(loss, layers[static_cast<std::size_t>(upto - 1)], h);
        if (upto == 1) {
          const tensor::GradCheckResult in = tensor::finite_diff_check(loss, input, h);
          if (in.max_rel_error > res.max_rel_error) {
            const std::size_t checked = in.checked + res.checked;
            res = in;
            res.checked = checked;
          } else {
            res.checked += in.checked;
          }
        }
        return res;
      }));
    }

    // GCN aggregator variant on the same graph.
    ParamStore gcn;
    gcn.add("H0", tensor::uniform<double>(4, kHidden, 1.0, rng));
    gcn.add("W_key_o", tensor::glorot_uniform<double>(kHidden, kHidden, rng));
    gcn.add("W_key_r", tensor::glorot_uniform<double>(kHidden, kHidden, rng));
    AblationConfig gcn_config;
    gcn_config.aggregator = Aggregator::Gcn;
    rows.push_back(timed("gcn layer", [&] {
      return tensor::finite_diff_check(
          [&](Tape& t) {
            AgnLayerVars p{t.param(gcn.get("W_key_o")), t.param(gcn.get("W_key_r")), {}, {}};
            return probe(t, agn4d_layer(t.param(gcn.get("H0")), original, reverse, p, gcn_config), r);
          },
          gcn, h);
    }));
  }

  // BoW projection of block label counts.
  {
    ParamStore ps;
    ps.add("W", tensor::glorot_uniform<double>(vocab, kHidden, rng));
    const Matrix r = tensor::uniform<double>(g.blocks, kHidden, 1.0, rng);
    rows.push_back(timed("bow projection", [&] {
      return tensor::finite_diff_check([&](Tape& t) { return probe(t, bow_forward(g, t.param(ps.get("W"))), r); },
                                       ps, h);
    }));
  }

  // Fusion, max-pooling and the softmax classifier under cross-entropy.
  {
    ParamStore ps;
    ps.add("local", tensor::uniform<double>(6, kHidden, 1.0, rng));
    ps.add("contextual", tensor::uniform<double>(6, kHidden, 1.0, rng));
    ps.add("W", tensor::glorot_uniform<double>(kHidden, 3, rng));
    ps.add("b", tensor::uniform<double>(1, 3, 0.1, rng));
    rows.push_back(timed("fusion+classifier", [&] {
      return tensor::finite_diff_check(
          [&](Tape& t) {
            const Var v = fuse_and_pool(t.param(ps.get("local")), t.param(ps.get("contextual")));
            return tensor::cross_entropy_with_logits(class_logits(v, t.param(ps.get("W")), t.param(ps.get("b"))), {2});
          },
          ps, h);
    }));
  }

  // Clone head under binary cross-entropy.
  {
    ParamStore ps;
    ps.add("v1", tensor::uniform<double>(1, kHidden, 1.0, rng));
    ps.add("v2", tensor::uniform<double>(1, kHidden, 1.0, rng));
    ps.add("W_o", tensor::glorot_uniform<double>(kHidden, 1, rng));
    ps.add("b_o", tensor::uniform<double>(1, 1, 0.1, rng));
    rows.push_back(timed("clone head", [&] {
      return tensor::finite_diff_check(
          [&](Tape& t) {
            const Var logit = clone_logit(t.param(ps.get("v1")), t.param(ps.get("v2")), t.param(ps.get("W_o")),
                                          t.param(ps.get("b_o")));
            return tensor::binary_cross_entropy_with_logits(logit, {1});
          },
          ps, h);
    }));
  }

  // Full default model on the fixture program.
  {
    ModelDims dims{vocab, kEmbed, kHidden, 3, 2};
    MfgnnModel m(dims, AblationConfig{}, Task::Classify, seed);
    rows.push_back(timed("full model", [&] {
      return tensor::finite_diff_check(
          [&](Tape& t) {
            return tensor::cross_entropy_with_logits(m.class_logits(t, m.program_vector(t, g)), {1});
          },
          m.params(), h);
    }));
  }
  return rows;
}

}  // namespace mfgnn::nn
