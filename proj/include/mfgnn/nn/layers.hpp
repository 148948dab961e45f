#pragma once

#include <vector>

#include "mfgnn/nn/ablation_config.hpp"
#include "mfgnn/nn/encode.hpp"
#include "mfgnn/tensor/ops.hpp"

namespace mfgnn::nn {

using tensor::Matrix;
using tensor::Var;

inline constexpr double kLeakySlope = 0.2;

struct TbcnnVars {
  Var embedding;  // vocab × embed
  Var w_t;        // embed × hidden
  Var w_l;
  Var w_r;
  Var bias;       // 1 × hidden
};

/// Local features, blocks × hidden: per node
/// y_i = tanh(Σ_{j ∈ {i} ∪ children(i)} (η^t_j e_j W^t + η^l_j e_j W^l + η^r_j e_j W^r) + b),
/// then a column-wise max over each block's nodes.
Var tbcnn_forward(const EncodedGraph& g, const TbcnnVars& p);

/// BoW block features projected to hidden width: counts · W.
Var bow_forward(const EncodedGraph& g, Var projection);

/// α per edge slot (|edges| × 1), softmax within each source of
/// LeakyReLU(⟨P_src, k_src⟩ + ⟨P_dst[:, kind], k_nbr⟩).
Var attention(Var keys, const DirectedEdges& edges, Var p_src, Var p_dst, int nodes);

/// ELU(Σ_v α_v k_v) per source; zero rows for sources without edges.
Var agn4d_aggregate(Var keys, const DirectedEdges& edges, Var p_src, Var p_dst, int nodes,
                    Matrix* alpha_out = nullptr);

/// Plain neighbour sum Σ_v k_v, no attention and no nonlinearity.
Var gcn_aggregate(Var keys, const DirectedEdges& edges, int nodes);

struct AgnLayerVars {
  Var w_key_o;  // width × width
  Var w_key_r;
  Var p_src;    // width × 1
  Var p_dst;    // width × kinds
};

struct LayerTrace {
  DirectedEdges original;
  DirectedEdges reverse;
  Matrix alpha_original;
  Matrix alpha_reverse;
};

/// One graph layer: keys per direction, aggregation over successors in the
/// graph and in its reverse, then h_o + h_r + H_prev (or concat(h_o + h_r,
/// H_prev) under Combine::Concat).
Var agn4d_layer(Var h_prev, const DirectedEdges& original, const DirectedEdges& reverse,
                const AgnLayerVars& p, const AblationConfig& config, LayerTrace* trace = nullptr);

/// Row-wise sum then column-wise max: blocks × width -> 1 × width.
Var fuse_and_pool(Var local, Var contextual);

/// v W + b, 1 × classes.
Var class_logits(Var v, Var w, Var b);

/// ⟨W_o, |v1 - v2|⟩ + b_o, 1 × 1.
Var clone_logit(Var v1, Var v2, Var w_o, Var b_o);

// Value-level forms of the heads and of the attention rule.

/// softmax(v W + b) for a 1 × width v.
std::vector<double> classify(const Matrix& v, const Matrix& w, const Matrix& b);
/// sigmoid(⟨W_o, |v1 - v2|⟩ + b_o).
double clone_score(const Matrix& v1, const Matrix& v2, const Matrix& w_o, const Matrix& b_o);

/// α over the successors of one block u: keys of u and of each successor (1 × width
/// rows), the attention column of each edge, P_src (width × 1), P_dst (width × kinds).
std::vector<double> attention_coefficients(const Matrix& k_u, const std::vector<Matrix>& k_v,
                                           const std::vector<int>& kinds, const Matrix& p_src,
                                           const Matrix& p_dst);

}  // namespace mfgnn::nn
