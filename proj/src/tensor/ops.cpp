#include "mfgnn/tensor/ops.hpp"

#include <cmath>
#include <limits>

namespace mfgnn::tensor {

namespace {

Tape& tape_of(Var a) {
  if (a.tape == nullptr) throw std::logic_error("unrecorded Var");
  return *a.tape;
}

void require_same(const char* op, Var a, Var b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError::of(op, a.value(), b.value());
}

void check_segments(const char* op, Index rows, const std::vector<int>& segment, int segments) {
  if (static_cast<Index>(segment.size()) != rows) {
    throw ShapeError(std::string(op) + ": " + std::to_string(segment.size()) +
                     " segment ids for " + std::to_string(rows) + " rows");
  }
  for (int s : segment) {
    if (s < 0 || s >= segments) throw std::out_of_range(std::string(op) + ": segment id out of range");
  }
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix softmax_rows(const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  for (Index i = 0; i < z.rows(); ++i) {
    const double mx = z.row(i).maxCoeff();
    out.row(i) = (z.row(i).array() - mx).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) throw ShapeError::of("matmul", a.value(), b.value());
  return tape_of(a).push(a.value() * b.value(), {a, b}, [a, b](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(a.id)) t.accumulate(a.id, g * t.value(b.id).transpose());
    if (t.needs_grad(b.id)) t.accumulate(b.id, t.value(a.id).transpose() * g);
  });
}

Var add(Var a, Var b) {
  require_same("add", a, b);
  return tape_of(a).push(a.value() + b.value(), {a, b}, [a, b](Tape& t, int self) {
    t.accumulate(a.id, t.grad(self));
    t.accumulate(b.id, t.grad(self));
  });
}

Var sub(Var a, Var b) {
  require_same("sub", a, b);
  return tape_of(a).push(a.value() - b.value(), {a, b}, [a, b](Tape& t, int self) {
    t.accumulate(a.id, t.grad(self));
    t.accumulate(b.id, -t.grad(self));
  });
}

Var add_rowvec(Var a, Var b) {
  if (b.rows() != 1 || b.cols() != a.cols()) throw ShapeError::of("add_rowvec", a.value(), b.value());
  Matrix out = a.value().rowwise() + b.value().row(0);
  return tape_of(a).push(std::move(out), {a, b}, [a, b](Tape& t, int self) {
    t.accumulate(a.id, t.grad(self));
    t.accumulate(b.id, t.grad(self).colwise().sum());
  });
}

Var scale(Var a, double s) {
  return tape_of(a).push(s * a.value(), {a}, [a, s](Tape& t, int self) {
    t.accumulate(a.id, s * t.grad(self));
  });
}

Var mul(Var a, Var b) {
  require_same("mul", a, b);
  Matrix out = a.value().cwiseProduct(b.value());
  return tape_of(a).push(std::move(out), {a, b}, [a, b](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(a.id)) t.accumulate(a.id, g.cwiseProduct(t.value(b.id)));
    if (t.needs_grad(b.id)) t.accumulate(b.id, g.cwiseProduct(t.value(a.id)));
  });
}

Var mul_colvec(Var a, Var c) {
  if (c.cols() != 1 || c.rows() != a.rows()) throw ShapeError::of("mul_colvec", a.value(), c.value());
  Matrix out = c.value().col(0).asDiagonal() * a.value();
  return tape_of(a).push(std::move(out), {a, c}, [a, c](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(a.id)) t.accumulate(a.id, t.value(c.id).col(0).asDiagonal() * g);
    if (t.needs_grad(c.id)) t.accumulate(c.id, g.cwiseProduct(t.value(a.id)).rowwise().sum());
  });
}

Var concat(Var a, Var b, int axis) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  Matrix out;
  if (axis == 0) {
    if (av.cols() != bv.cols()) throw ShapeError::of("concat(axis 0)", av, bv);
    out.resize(av.rows() + bv.rows(), av.cols());
    out << av, bv;
  } else {
    if (av.rows() != bv.rows()) throw ShapeError::of("concat(axis 1)", av, bv);
    out.resize(av.rows(), av.cols() + bv.cols());
    out << av, bv;
  }
  const Index ar = av.rows();
  const Index ac = av.cols();
  return tape_of(a).push(std::move(out), {a, b}, [a, b, axis, ar, ac](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (axis == 0) {
      t.accumulate(a.id, g.topRows(ar));
      t.accumulate(b.id, g.bottomRows(g.rows() - ar));
    } else {
      t.accumulate(a.id, g.leftCols(ac));
      t.accumulate(b.id, g.rightCols(g.cols() - ac));
    }
  });
}

Var slice(Var a, Index row, Index col, Index rows, Index cols) {
  if (row < 0 || col < 0 || rows < 0 || cols < 0 || row + rows > a.rows() || col + cols > a.cols()) {
    throw ShapeError("slice: block " + std::to_string(rows) + "x" + std::to_string(cols) + " at (" +
                     std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                     shape_str(a.value()));
  }
  Matrix out = a.value().block(row, col, rows, cols);
  return tape_of(a).push(std::move(out), {a}, [a, row, col, rows, cols](Tape& t, int self) {
    t.grad_slot(a.id).block(row, col, rows, cols) += t.grad(self);
  });
}

Var leaky_relu(Var a, double slope) {
  Matrix out = a.value().unaryExpr([slope](double x) { return x > 0 ? x : slope * x; });
  return tape_of(a).push(std::move(out), {a}, [a, slope](Tape& t, int self) {
    Matrix d = t.value(a.id).unaryExpr([slope](double x) { return x > 0 ? 1.0 : slope; });
    t.accumulate(a.id, t.grad(self).cwiseProduct(d));
  });
}

Var elu(Var a) {
  Matrix out = a.value().unaryExpr([](double x) { return x > 0 ? x : std::expm1(x); });
  return tape_of(a).push(std::move(out), {a}, [a](Tape& t, int self) {
    Matrix d = t.value(a.id).unaryExpr([](double x) { return x > 0 ? 1.0 : std::exp(x); });
    t.accumulate(a.id, t.grad(self).cwiseProduct(d));
  });
}

Var sigmoid(Var a) {
  Matrix out = a.value().unaryExpr([](double x) { return sigmoid(x); });
  return tape_of(a).push(std::move(out), {a}, [a](Tape& t, int self) {
    const Matrix& y = t.value(self);
    t.accumulate(a.id, t.grad(self).cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix())));
  });
}

Var tanh(Var a) {
  Matrix out = a.value().array().tanh().matrix();
  return tape_of(a).push(std::move(out), {a}, [a](Tape& t, int self) {
    const Matrix& y = t.value(self);
    t.accumulate(a.id, t.grad(self).cwiseProduct((1.0 - y.array().square()).matrix()));
  });
}

Var abs(Var a) {
  Matrix out = a.value().cwiseAbs();
  return tape_of(a).push(std::move(out), {a}, [a](Tape& t, int self) {
    Matrix d = t.value(a.id).unaryExpr([](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
    t.accumulate(a.id, t.grad(self).cwiseProduct(d));
  });
}

Var softmax(Var a, int axis) {
  Matrix out = axis == 1 ? softmax_rows(a.value()) : Matrix(softmax_rows(a.value().transpose()).transpose());
  return tape_of(a).push(std::move(out), {a}, [a, axis](Tape& t, int self) {
    const Matrix& y = t.value(self);
    const Matrix& g = t.grad(self);
    Matrix gy = g.cwiseProduct(y);
    if (axis == 1) {
      t.accumulate(a.id, gy - y.cwiseProduct(gy.rowwise().sum().replicate(1, y.cols())));
    } else {
      t.accumulate(a.id, gy - y.cwiseProduct(gy.colwise().sum().replicate(y.rows(), 1)));
    }
  });
}

Var row_max_pool(Var a) {
  std::vector<int> segment(static_cast<std::size_t>(a.rows()), 0);
  if (a.rows() == 0) throw ShapeError("row_max_pool: no rows");
  return segment_max(a, segment, 1);
}

Var segment_max(Var a, const std::vector<int>& segment, int segments) {
  check_segments("segment_max", a.rows(), segment, segments);
  const Matrix& av = a.value();
  Matrix out = Matrix::Constant(segments, av.cols(), -std::numeric_limits<double>::infinity());
  std::vector<int> argmax(static_cast<std::size_t>(segments * av.cols()), -1);
  for (Index i = 0; i < av.rows(); ++i) {
    const int s = segment[static_cast<std::size_t>(i)];
    for (Index j = 0; j < av.cols(); ++j) {
      if (av(i, j) > out(s, j)) {
        out(s, j) = av(i, j);
        argmax[static_cast<std::size_t>(s * av.cols() + j)] = static_cast<int>(i);
      }
    }
  }
  for (int a_ : argmax) {
    if (a_ < 0) throw std::invalid_argument("segment_max: empty segment or NaN input");
  }
  const Index cols = av.cols();
  return tape_of(a).push(std::move(out), {a}, [a, argmax = std::move(argmax), cols](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_slot(a.id);
    for (Index s = 0; s < g.rows(); ++s) {
      for (Index j = 0; j < cols; ++j) ga(argmax[static_cast<std::size_t>(s * cols + j)], j) += g(s, j);
    }
  });
}

Var segment_sum(Var a, const std::vector<int>& segment, int segments) {
  check_segments("segment_sum", a.rows(), segment, segments);
  const Matrix& av = a.value();
  Matrix out = Matrix::Zero(segments, av.cols());
  for (Index i = 0; i < av.rows(); ++i) out.row(segment[static_cast<std::size_t>(i)]) += av.row(i);
  return tape_of(a).push(std::move(out), {a}, [a, segment](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_slot(a.id);
    for (std::size_t i = 0; i < segment.size(); ++i) ga.row(static_cast<Index>(i)) += g.row(segment[i]);
  });
}

Var segment_softmax(Var a, const std::vector<int>& segment, int segments) {
  if (a.cols() != 1) throw ShapeError("segment_softmax: expected a column, got " + shape_str(a.value()));
  check_segments("segment_softmax", a.rows(), segment, segments);
  const Matrix& av = a.value();
  std::vector<double> mx(static_cast<std::size_t>(segments), -std::numeric_limits<double>::infinity());
  for (Index i = 0; i < av.rows(); ++i) {
    double& m = mx[static_cast<std::size_t>(segment[static_cast<std::size_t>(i)])];
    m = std::max(m, av(i, 0));
  }
  Matrix out(av.rows(), 1);
  std::vector<double> total(static_cast<std::size_t>(segments), 0.0);
  for (Index i = 0; i < av.rows(); ++i) {
    const auto s = static_cast<std::size_t>(segment[static_cast<std::size_t>(i)]);
    out(i, 0) = std::exp(av(i, 0) - mx[s]);
    total[s] += out(i, 0);
  }
  for (Index i = 0; i < av.rows(); ++i) out(i, 0) /= total[static_cast<std::size_t>(segment[static_cast<std::size_t>(i)])];
  return tape_of(a).push(std::move(out), {a}, [a, segment, segments](Tape& t, int self) {
    const Matrix& y = t.value(self);
    const Matrix& g = t.grad(self);
    std::vector<double> dot(static_cast<std::size_t>(segments), 0.0);
    for (Index i = 0; i < y.rows(); ++i) dot[static_cast<std::size_t>(segment[static_cast<std::size_t>(i)])] += y(i, 0) * g(i, 0);
    Matrix d(y.rows(), 1);
    for (Index i = 0; i < y.rows(); ++i) {
      d(i, 0) = y(i, 0) * (g(i, 0) - dot[static_cast<std::size_t>(segment[static_cast<std::size_t>(i)])]);
    }
    t.accumulate(a.id, d);
  });
}

Var gather_rows(Var a, const std::vector<int>& index) {
  const Matrix& av = a.value();
  Matrix out(static_cast<Index>(index.size()), av.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] < 0 || index[k] >= av.rows()) throw std::out_of_range("gather_rows: row index out of range");
    out.row(static_cast<Index>(k)) = av.row(index[k]);
  }
  return tape_of(a).push(std::move(out), {a}, [a, index](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_slot(a.id);
    for (std::size_t k = 0; k < index.size(); ++k) ga.row(index[k]) += g.row(static_cast<Index>(k));
  });
}

Var gather_entries(Var a, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() != cols.size()) throw std::invalid_argument("gather_entries: index lists differ in length");
  const Matrix& av = a.value();
  Matrix out(static_cast<Index>(rows.size()), 1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= av.rows() || cols[k] < 0 || cols[k] >= av.cols()) {
      throw std::out_of_range("gather_entries: index out of range");
    }
    out(static_cast<Index>(k), 0) = av(rows[k], cols[k]);
  }
  return tape_of(a).push(std::move(out), {a}, [a, rows, cols](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_slot(a.id);
    for (std::size_t k = 0; k < rows.size(); ++k) ga(rows[k], cols[k]) += g(static_cast<Index>(k), 0);
  });
}

Var sum(Var a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return tape_of(a).push(std::move(out), {a}, [a](Tape& t, int self) {
    const Matrix& av = t.value(a.id);
    t.accumulate(a.id, Matrix::Constant(av.rows(), av.cols(), t.grad(self)(0, 0)));
  });
}

Var cross_entropy_with_logits(Var logits, const std::vector<int>& labels) {
  const Matrix& z = logits.value();
  if (static_cast<Index>(labels.size()) != z.rows() || z.rows() == 0) {
    throw ShapeError("cross_entropy_with_logits: " + std::to_string(labels.size()) + " labels for " +
                     shape_str(z) + " logits");
  }
  Matrix p = softmax_rows(z);
  double loss = 0.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= z.cols()) throw std::out_of_range("cross_entropy_with_logits: label out of range");
    const double mx = z.row(i).maxCoeff();
    loss += mx + std::log((z.row(i).array() - mx).exp().sum()) - z(i, y);
  }
  const double n = static_cast<double>(z.rows());
  Matrix out(1, 1);
  out(0, 0) = loss / n;
  return tape_of(logits).push(std::move(out), {logits}, [logits, labels, p = std::move(p), n](Tape& t, int self) {
    Matrix d = p;
    for (std::size_t i = 0; i < labels.size(); ++i) d(static_cast<Index>(i), labels[i]) -= 1.0;
    t.accumulate(logits.id, d * (t.grad(self)(0, 0) / n));
  });
}

Var binary_cross_entropy_with_logits(Var logits, const std::vector<int>& labels) {
  const Matrix& z = logits.value();
  if (z.cols() != 1 || static_cast<Index>(labels.size()) != z.rows() || z.rows() == 0) {
    throw ShapeError("binary_cross_entropy_with_logits: " + std::to_string(labels.size()) +
                     " labels for " + shape_str(z) + " logits");
  }
  double loss = 0.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const double x = z(i, 0);
    const double y = labels[static_cast<std::size_t>(i)];
    loss += std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
  }
  const double n = static_cast<double>(z.rows());
  Matrix out(1, 1);
  out(0, 0) = loss / n;
  return tape_of(logits).push(std::move(out), {logits}, [logits, labels, n](Tape& t, int self) {
    const Matrix& zv = t.value(logits.id);
    Matrix d(zv.rows(), 1);
    for (Index i = 0; i < zv.rows(); ++i) d(i, 0) = sigmoid(zv(i, 0)) - labels[static_cast<std::size_t>(i)];
    t.accumulate(logits.id, d * (t.grad(self)(0, 0) / n));
  });
}

}  // namespace mfgnn::tensor
