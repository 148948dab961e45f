#pragma once

#include <cmath>
#include <random>

#include "mfgnn/tensor/matrix.hpp"

namespace mfgnn::tensor {

using Rng = std::mt19937_64;

/// Uniform on [-limit, limit].
template <typename Scalar = double>
MatrixX<Scalar> uniform(Index rows, Index cols, Scalar limit, Rng& rng) {
  std::uniform_real_distribution<Scalar> dist(-limit, limit);
  MatrixX<Scalar> m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

/// Uniform on ±sqrt(6 / (fan_in + fan_out)).
template <typename Scalar = double>
MatrixX<Scalar> glorot_uniform(Index fan_in, Index fan_out, Rng& rng) {
  const Scalar limit = std::sqrt(Scalar(6) / static_cast<Scalar>(fan_in + fan_out));
  return uniform<Scalar>(fan_in, fan_out, limit, rng);
}

inline constexpr double kEmbeddingInitLimit = 0.05;

}  // namespace mfgnn::tensor
