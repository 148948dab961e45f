#include <cmath>

#include "mfgnn/nn/layers.hpp"

namespace mfgnn::nn {

using tensor::Tape;

Var attention(Var keys, const DirectedEdges& edges, Var p_src, Var p_dst, int nodes) {
  const Var src_score = tensor::matmul(keys, p_src);  // nodes × 1
  const Var dst_score = tensor::matmul(keys, p_dst);  // nodes × kinds
  const Var logits = tensor::gather_rows(src_score, edges.src) +
                     tensor::gather_entries(dst_score, edges.nbr, edges.kind);
  return tensor::segment_softmax(tensor::leaky_relu(logits, kLeakySlope), edges.src, nodes);
}

Var agn4d_aggregate(Var keys, const DirectedEdges& edges, Var p_src, Var p_dst, int nodes,
                    Matrix* alpha_out) {
  Tape& tape = *keys.tape;
  if (edges.size() == 0) {
    if (alpha_out != nullptr) alpha_out->resize(0, 1);
    return tape.constant(Matrix::Zero(nodes, keys.cols()));
  }
  const Var alpha = attention(keys, edges, p_src, p_dst, nodes);
  if (alpha_out != nullptr) *alpha_out = alpha.value();
  const Var messages = tensor::mul_colvec(tensor::gather_rows(keys, edges.nbr), alpha);
  return tensor::elu(tensor::segment_sum(messages, edges.src, nodes));
}

Var gcn_aggregate(Var keys, const DirectedEdges& edges, int nodes) {
  if (edges.size() == 0) return keys.tape->constant(Matrix::Zero(nodes, keys.cols()));
  return tensor::segment_sum(tensor::gather_rows(keys, edges.nbr), edges.src, nodes);
}

Var agn4d_layer(Var h_prev, const DirectedEdges& original, const DirectedEdges& reverse,
                const AgnLayerVars& p, const AblationConfig& config, LayerTrace* trace) {
  if (h_prev.cols() != p.w_key_o.rows() || h_prev.cols() != p.w_key_r.rows()) {
    throw tensor::ShapeError::of("agn4d_layer", h_prev.value(), p.w_key_o.value());
  }
  const int nodes = static_cast<int>(h_prev.rows());
  const Var k_o = tensor::matmul(h_prev, p.w_key_o);
  const Var k_r = tensor::matmul(h_prev, p.w_key_r);
  Var h_o;
  Var h_r;
  if (config.aggregator == Aggregator::Gcn) {
    h_o = gcn_aggregate(k_o, original, nodes);
    h_r = gcn_aggregate(k_r, reverse, nodes);
  } else {
    h_o = agn4d_aggregate(k_o, original, p.p_src, p.p_dst, nodes,
                          trace != nullptr ? &trace->alpha_original : nullptr);
    h_r = agn4d_aggregate(k_r, reverse, p.p_src, p.p_dst, nodes,
                          trace != nullptr ? &trace->alpha_reverse : nullptr);
  }
  if (trace != nullptr) {
    trace->original = original;
    trace->reverse = reverse;
  }
  if (config.combine == Combine::Concat) return tensor::concat(h_o + h_r, h_prev, 1);
  return h_o + h_r + h_prev;
}

Var fuse_and_pool(Var local, Var contextual) {
  return tensor::row_max_pool(local + contextual);
}

Var class_logits(Var v, Var w, Var b) { return tensor::add_rowvec(tensor::matmul(v, w), b); }

Var clone_logit(Var v1, Var v2, Var w_o, Var b_o) {
  return tensor::matmul(tensor::abs(v1 - v2), w_o) + b_o;
}

std::vector<double> classify(const Matrix& v, const Matrix& w, const Matrix& b) {
  const Matrix p = tensor::softmax_rows(v * w + b);
  return {p.data(), p.data() + p.size()};
}

double clone_score(const Matrix& v1, const Matrix& v2, const Matrix& w_o, const Matrix& b_o) {
  const Matrix d = (v1 - v2).cwiseAbs();
  return tensor::sigmoid((d * w_o)(0, 0) + b_o(0, 0));
}

std::vector<double> attention_coefficients(const Matrix& k_u, const std::vector<Matrix>& k_v,
                                           const std::vector<int>& kinds, const Matrix& p_src,
                                           const Matrix& p_dst) {
  const double src = (k_u * p_src)(0, 0);
  Matrix logits(1, static_cast<tensor::Index>(k_v.size()));
  for (std::size_t i = 0; i < k_v.size(); ++i) {
    const double e = src + (k_v[i] * p_dst.col(kinds[i]))(0, 0);
    logits(0, static_cast<tensor::Index>(i)) = e > 0 ? e : kLeakySlope * e;
  }
  const Matrix a = tensor::softmax_rows(logits);
  return {a.data(), a.data() + a.size()};
}

}  // namespace mfgnn::nn
