#include "mfgnn/nn/encode.hpp"

#include <functional>

namespace mfgnn::nn {

EtaWeights tbcnn_weights(int depth, int max_depth, int position, int siblings) {
  EtaWeights w;
  w.t = max_depth == 1 ? 1.0 : static_cast<double>(depth - 1) / static_cast<double>(max_depth - 1);
  const double ratio =
      siblings == 1 ? 0.5 : static_cast<double>(position - 1) / static_cast<double>(siblings - 1);
  w.l = w.t * ratio;
  w.r = w.t * (1.0 - w.l);
  return w;
}

EncodedGraph encode(const model::CodeGraph& graph, const model::Vocabulary& vocab) {
  EncodedGraph g;
  g.blocks = static_cast<int>(graph.blocks.size());
  g.edges = graph.edges;
  g.label = graph.label;
  g.bow = tensor::Matrix::Zero(g.blocks, static_cast<tensor::Index>(vocab.size()));

  std::vector<EtaWeights> eta;
  for (const auto& b : graph.blocks) {
    const int max_depth = static_cast<int>(b.root.depth());
    std::function<int(const model::TreeNode&, int, int, int)> walk =
        [&](const model::TreeNode& n, int depth, int position, int siblings) {
          const int id = static_cast<int>(g.token.size());
          g.token.push_back(vocab.index(n.label));
          g.node_block.push_back(b.block);
          g.bow(b.block, g.token.back()) += 1.0;
          eta.push_back(tbcnn_weights(depth, max_depth, position, siblings));
          g.window_member.push_back(id);
          g.window_owner.push_back(id);
          const int count = static_cast<int>(n.children.size());
          for (int i = 0; i < count; ++i) {
            const int child = walk(n.children[static_cast<std::size_t>(i)], depth + 1, i + 1, count);
            g.window_member.push_back(child);
            g.window_owner.push_back(id);
          }
          return id;
        };
    walk(b.root, 1, 1, 1);
  }
  g.eta.resize(g.nodes(), 3);
  for (std::size_t k = 0; k < eta.size(); ++k) {
    g.eta.row(static_cast<tensor::Index>(k)) << eta[k].t, eta[k].l, eta[k].r;
  }
  return g;
}

int edge_kind_columns(EdgeTyping typing) {
  return typing == EdgeTyping::Multi ? static_cast<int>(ir::kEdgeKindCount) : 1;
}

DirectedEdges select_edges(const std::vector<ir::FlowEdge>& edges, const AblationConfig& config,
                           bool reverse) {
  DirectedEdges out;
  for (const auto& e : edges) {
    const bool dataflow = e.kind == ir::EdgeKind::DataFlow;
    if (dataflow && config.edges == EdgeSubset::Control) continue;
    if (!dataflow && config.edges == EdgeSubset::Dataflow) continue;
    out.src.push_back(reverse ? e.dst : e.src);
    out.nbr.push_back(reverse ? e.src : e.dst);
    out.kind.push_back(config.edge_typing == EdgeTyping::Multi ? static_cast<int>(e.kind) : 0);
  }
  return out;
}

}  // namespace mfgnn::nn
