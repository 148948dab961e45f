#include "mfgnn/tensor/adamax.hpp"

namespace mfgnn::tensor {

void Adamax::step(ParamStore& params) {
  while (m_.size() < params.size()) {
    const Matrix& v = params[m_.size()].value;
    m_.push_back(Matrix::Zero(v.rows(), v.cols()));
    u_.push_back(Matrix::Zero(v.rows(), v.cols()));
  }
  ++t_;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) {
      throw ShapeError::of("adamax_step", p.value, p.grad);
    }
    adamax_update(p.value, p.grad, m_[i], u_[i], t_, config_);
  }
}

}  // namespace mfgnn::tensor
