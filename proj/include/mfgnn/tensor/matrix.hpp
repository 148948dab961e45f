#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mfgnn::tensor {

/// Every tensor is two-dimensional and row-major; vectors are 1×n rows.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using ColVectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Index = Eigen::Index;

template <typename Derived>
std::string shape_str(const Eigen::EigenBase<Derived>& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

/// Operand shapes are incompatible; the message names both.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;

  template <typename A, typename B>
  static ShapeError of(const std::string& op, const Eigen::EigenBase<A>& a,
                       const Eigen::EigenBase<B>& b) {
    return ShapeError(op + ": incompatible shapes " + shape_str(a) + " and " + shape_str(b));
  }
};

}  // namespace mfgnn::tensor
