#include "mfgnn/nn/layers.hpp"

namespace mfgnn::nn {

using tensor::Tape;

Var tbcnn_forward(const EncodedGraph& g, const TbcnnVars& p) {
  Tape& tape = *p.embedding.tape;
  const Var e = tensor::gather_rows(p.embedding, g.token);
  // Per node j the window term does not depend on the owner, so weight each
  // node once and sum over windows.
  Var z = tensor::mul_colvec(tensor::matmul(e, p.w_t), tape.constant(g.eta.col(0)));
  z = z + tensor::mul_colvec(tensor::matmul(e, p.w_l), tape.constant(g.eta.col(1)));
  z = z + tensor::mul_colvec(tensor::matmul(e, p.w_r), tape.constant(g.eta.col(2)));
  const Var windows = tensor::segment_sum(tensor::gather_rows(z, g.window_member), g.window_owner, g.nodes());
  const Var y = tensor::tanh(tensor::add_rowvec(windows, p.bias));
  return tensor::segment_max(y, g.node_block, g.blocks);
}

Var bow_forward(const EncodedGraph& g, Var projection) {
  return tensor::matmul(projection.tape->constant(g.bow), projection);
}

}  // namespace mfgnn::nn
