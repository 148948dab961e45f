#pragma once

#include <cmath>
#include <vector>

#include "mfgnn/tensor/tape.hpp"

namespace mfgnn::tensor {

struct AdamaxConfig {
  double lr = 0.002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One Adamax update of `p` in place from gradient `g`. t is the already
/// incremented step count.
template <typename P, typename G, typename M, typename U>
void adamax_update(Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<G>& g, Eigen::MatrixBase<M>& m,
                   Eigen::MatrixBase<U>& u, long t, const AdamaxConfig& c) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  u = (c.beta2 * u.array()).max(g.array().abs()).matrix();
  const double step = c.lr / (1.0 - std::pow(c.beta1, static_cast<double>(t)));
  p.array() -= step * m.array() / (u.array() + c.eps);
}

/// First moment m and infinity norm u per parameter, plus the step counter.
class Adamax {
 public:
  explicit Adamax(AdamaxConfig config = {}) : config_(config) {}

  /// t <- t + 1, then updates every parameter of `params` from its gradient.
  void step(ParamStore& params);

  long t() const { return t_; }
  const AdamaxConfig& config() const { return config_; }
  const Matrix& m(std::size_t i) const { return m_.at(i); }
  const Matrix& u(std::size_t i) const { return u_.at(i); }

 private:
  AdamaxConfig config_;
  long t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> u_;
};

}  // namespace mfgnn::tensor
