#pragma once

#include <optional>
#include <vector>

#include "mfgnn/model/code_graph.hpp"
#include "mfgnn/model/vocabulary.hpp"
#include "mfgnn/nn/ablation_config.hpp"
#include "mfgnn/tensor/matrix.hpp"

namespace mfgnn::nn {

/// Position coefficients of one tree node (η^t, η^l, η^r).
struct EtaWeights {
  double t = 0.0;
  double l = 0.0;
  double r = 0.0;
};

/// Depth-weighted TBCNN coefficients for a node at global depth `depth` of a
/// tree of depth `max_depth`, sibling position `position` of `siblings`
/// (all 1-based). max_depth = 1 gives η^t = 1; siblings = 1 gives a position
/// ratio of 0.5.
EtaWeights tbcnn_weights(int depth, int max_depth, int position, int siblings);

/// Edges seen from their source: slot k is the edge src[k] -> nbr[k] with
/// attention column kind[k].
struct DirectedEdges {
  std::vector<int> src;
  std::vector<int> nbr;
  std::vector<int> kind;

  std::size_t size() const { return src.size(); }
};

/// Vocabulary-encoded CodeGraph. Tree nodes of every block are flattened in
/// pre-order into one node list.
struct EncodedGraph {
  int blocks = 0;
  std::vector<int> token;
  std::vector<int> node_block;
  /// nodes × 3: η^t, η^l, η^r.
  tensor::Matrix eta;
  /// Convolution windows as (member, owner) pairs: each node owns itself and
  /// its children.
  std::vector<int> window_member;
  std::vector<int> window_owner;
  /// blocks × vocabulary label counts.
  tensor::Matrix bow;
  std::vector<ir::FlowEdge> edges;
  std::optional<int> label;

  int nodes() const { return static_cast<int>(token.size()); }
};

EncodedGraph encode(const model::CodeGraph& graph, const model::Vocabulary& vocab);

/// Attention column count for a typing mode: 7 or 1.
int edge_kind_columns(EdgeTyping typing);

/// Edges kept by `config`, in the original orientation (src -> successor) or
/// transposed (the reverse graph).
DirectedEdges select_edges(const std::vector<ir::FlowEdge>& edges, const AblationConfig& config,
                           bool reverse);

}  // namespace mfgnn::nn
