#include "mfgnn/tensor/tape.hpp"

namespace mfgnn::tensor {

Parameter& ParamStore::add(std::string name, Matrix value) {
  if (index_.count(name) != 0) throw std::invalid_argument("duplicate parameter '" + name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = std::move(name);
  p->grad = Matrix::Zero(value.rows(), value.cols());
  p->value = std::move(value);
  index_.emplace(p->name, params_.size());
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter* ParamStore::find(std::string_view name) {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : params_[it->second].get();
}

const Parameter* ParamStore::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : params_[it->second].get();
}

Parameter& ParamStore::get(std::string_view name) {
  if (Parameter* p = find(name)) return *p;
  throw std::out_of_range("no parameter '" + std::string(name) + "'");
}

const Parameter& ParamStore::get(std::string_view name) const {
  if (const Parameter* p = find(name)) return *p;
  throw std::out_of_range("no parameter '" + std::string(name) + "'");
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p->grad.setZero(p->value.rows(), p->value.cols());
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

ParamStore ParamStore::clone() const {
  ParamStore out;
  for (const auto& p : params_) out.add(p->name, p->value);
  return out;
}

const Matrix& Var::value() const { return tape->value(id); }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) throw ShapeError("scalar(): value is " + shape_str(v));
  return v(0, 0);
}

Var Tape::constant(Matrix value) {
  entries_.push_back({std::move(value), {}, {}, nullptr, false});
  return {this, static_cast<int>(entries_.size()) - 1};
}

Var Tape::param(Parameter& p) {
  entries_.push_back({p.value, {}, {}, &p, true});
  return {this, static_cast<int>(entries_.size()) - 1};
}

Var Tape::push(Matrix value, std::initializer_list<Var> inputs, Backward backward) {
  bool needs = false;
  for (const Var& v : inputs) {
    if (v.tape != this) throw std::logic_error("operands recorded on different tapes");
    needs = needs || entries_[static_cast<std::size_t>(v.id)].needs_grad;
  }
  entries_.push_back({std::move(value), {}, needs ? std::move(backward) : Backward{}, nullptr, needs});
  return {this, static_cast<int>(entries_.size()) - 1};
}

Matrix& Tape::grad_slot(int id) {
  Entry& e = entries_[static_cast<std::size_t>(id)];
  if (e.grad.size() == 0) e.grad = Matrix::Zero(e.value.rows(), e.value.cols());
  return e.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw std::logic_error("loss recorded on a different tape");
  const Matrix& lv = value(loss.id);
  if (lv.rows() != 1 || lv.cols() != 1) throw ShapeError("backward(): loss is " + shape_str(lv));
  for (auto& e : entries_) e.grad.resize(0, 0);
  accumulate(loss.id, Matrix::Ones(1, 1));
  for (int i = loss.id; i >= 0; --i) {
    Entry& e = entries_[static_cast<std::size_t>(i)];
    if (e.grad.size() == 0) continue;
    if (e.backward) e.backward(*this, i);
    if (e.param != nullptr) e.param->grad += e.grad;
  }
}

}  // namespace mfgnn::tensor
