#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mfgnn/tensor/matrix.hpp"

namespace mfgnn::tensor {

/// A learned tensor: value plus gradient slot of identical shape.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
};

/// Named parameters with stable addresses, kept in insertion order.
class ParamStore {
 public:
  Parameter& add(std::string name, Matrix value);
  Parameter& get(std::string_view name);
  const Parameter& get(std::string_view name) const;
  Parameter* find(std::string_view name);
  const Parameter* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  void zero_grad();
  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;
  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }

  /// Deep copy of values; gradients zeroed.
  ParamStore clone() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

class Tape;

/// Handle to one recorded value.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Matrix& value() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  /// Entry (0, 0) of a 1×1 value.
  double scalar() const;
};

/// Reverse-mode record of primitive applications, appended in topological
/// order. Confined to one thread.
class Tape {
 public:
  using Backward = std::function<void(Tape&, int self)>;

  Var constant(Matrix value);
  /// Leaf whose gradient flows into `p.grad` on backward().
  Var param(Parameter& p);
  /// Records an op result. `backward` is dropped when no input needs a gradient.
  Var push(Matrix value, std::initializer_list<Var> inputs, Backward backward);

  const Matrix& value(int id) const { return entries_[static_cast<std::size_t>(id)].value; }
  const Matrix& grad(int id) const { return entries_[static_cast<std::size_t>(id)].grad; }
  bool needs_grad(int id) const { return entries_[static_cast<std::size_t>(id)].needs_grad; }

  /// Adds `g` into the gradient of `id` if it needs one.
  template <typename Derived>
  void accumulate(int id, const Eigen::MatrixBase<Derived>& g) {
    Entry& e = entries_[static_cast<std::size_t>(id)];
    if (!e.needs_grad) return;
    if (e.grad.size() == 0) e.grad = Matrix::Zero(e.value.rows(), e.value.cols());
    e.grad += g;
  }
  /// Gradient storage of `id`, allocated on demand; for sparse updates.
  Matrix& grad_slot(int id);

  /// Seeds d(loss)/d(loss) = 1 and runs every backward rule in reverse;
  /// parameter gradients are added to their slots. `loss` must be 1×1.
  void backward(Var loss);

  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    Matrix value;
    Matrix grad;
    Backward backward;
    Parameter* param = nullptr;
    bool needs_grad = false;
  };
  std::vector<Entry> entries_;
};

}  // namespace mfgnn::tensor
