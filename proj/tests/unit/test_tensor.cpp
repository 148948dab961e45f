#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <random>

#include "mfgnn/tensor/adamax.hpp"
#include "mfgnn/tensor/checkpoint.hpp"
#include "mfgnn/tensor/gradcheck.hpp"
#include "mfgnn/tensor/init.hpp"
#include "mfgnn/tensor/ops.hpp"

using namespace mfgnn::tensor;

namespace {

Matrix mat(Index r, Index c, std::initializer_list<double> xs) {
  Matrix m(r, c);
  Index i = 0;
  for (double x : xs) m.data()[i++] = x;
  return m;
}

// Reduces an arbitrary-shape output to a scalar with fixed random weights so
// every output entry contributes a distinct gradient.
Var weighted_sum(Tape& tape, Var y, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix w = uniform(y.rows(), y.cols(), 1.0, rng);
  return sum(mul(y, tape.constant(w)));
}

double check_unary(const std::function<Var(Var)>& op, Matrix x0, std::uint64_t seed = 1) {
  ParamStore ps;
  ps.add("x", std::move(x0));
  return finite_diff_check([&](Tape& t) { return weighted_sum(t, op(t.param(ps.get("x"))), seed); }, ps)
      .max_rel_error;
}

double check_binary(const std::function<Var(Var, Var)>& op, Matrix a0, Matrix b0) {
  ParamStore ps;
  ps.add("a", std::move(a0));
  ps.add("b", std::move(b0));
  return finite_diff_check(
             [&](Tape& t) { return weighted_sum(t, op(t.param(ps.get("a")), t.param(ps.get("b"))), 3); }, ps)
      .max_rel_error;
}

Matrix rand_mat(Index r, Index c, std::uint64_t seed) {
  Rng rng(seed);
  return uniform(r, c, 1.0, rng);
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("forward examples") {
  Tape t;
  CHECK(softmax(t.constant(mat(1, 2, {0, 0}))).value() == mat(1, 2, {0.5, 0.5}));
  CHECK(leaky_relu(t.constant(mat(1, 2, {-1, 2})), 0.2).value().isApprox(mat(1, 2, {-0.2, 2})));
  CHECK(matmul(t.constant(mat(1, 2, {1, 2})), t.constant(mat(2, 1, {3, 4}))).value()(0, 0) == 11.0);
  CHECK(elu(t.constant(mat(1, 2, {0, -1}))).value()(0, 1) == doctest::Approx(std::exp(-1.0) - 1.0));
  CHECK(row_max_pool(t.constant(mat(3, 2, {1, 5, 4, 2, 3, 3}))).value() == mat(1, 2, {4, 5}));
  CHECK(segment_sum(t.constant(mat(3, 1, {1, 2, 4})), {1, 1, 0}, 3).value() == mat(3, 1, {4, 3, 0}));
  CHECK(sigmoid(t.constant(mat(1, 1, {0}))).scalar() == 0.5);
}

TEST_CASE("shape mismatches raise ShapeError") {
  Tape t;
  const Var a = t.constant(Matrix::Zero(2, 3));
  CHECK_THROWS_AS(matmul(a, t.constant(Matrix::Zero(2, 3))), ShapeError);
  CHECK_THROWS_AS(add(a, t.constant(Matrix::Zero(3, 2))), ShapeError);
  CHECK_THROWS_AS(add_rowvec(a, t.constant(Matrix::Zero(1, 2))), ShapeError);
  CHECK_THROWS_AS(concat(a, t.constant(Matrix::Zero(3, 3)), 1), ShapeError);
  try {
    matmul(a, t.constant(Matrix::Zero(2, 3)));
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("2x3") != std::string::npos);
  }
}

TEST_CASE("softmax rows sum to one and shift invariance holds") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix x = uniform(4, 7, 30.0, rng);
    const Matrix s = softmax_rows(x);
    for (Index r = 0; r < s.rows(); ++r) {
      CHECK(std::abs(s.row(r).sum() - 1.0) < 1e-12);
      CHECK((s.row(r).array() >= 0).all());
    }
    x.array() += 100.0;
    CHECK(softmax_rows(x).isApprox(s, 1e-12));
  }
}

TEST_CASE("backward examples") {
  SUBCASE("d(sum(x*x))/dx = 2x") {
    ParamStore ps;
    auto& p = ps.add("x", mat(1, 3, {1, -2, 3}));
    Tape t;
    const Var x = t.param(p);
    t.backward(sum(mul(x, x)));
    CHECK(p.grad == mat(1, 3, {2, -4, 6}));
  }
  SUBCASE("gradients accumulate across tapes") {
    ParamStore ps;
    auto& p = ps.add("x", mat(1, 1, {3}));
    for (int i = 0; i < 2; ++i) {
      Tape t;
      t.backward(sum(t.param(p)));
    }
    CHECK(p.grad(0, 0) == 2.0);
    ps.zero_grad();
    CHECK(p.grad(0, 0) == 0.0);
  }
  SUBCASE("constants receive no parameter gradient") {
    ParamStore ps;
    auto& p = ps.add("w", mat(1, 1, {2}));
    Tape t;
    const Var y = mul(t.param(p), t.constant(mat(1, 1, {5})));
    t.backward(y);
    CHECK(p.grad(0, 0) == 5.0);
  }
  SUBCASE("non-scalar loss is rejected") {
    Tape t;
    CHECK_THROWS(t.backward(t.constant(Matrix::Zero(2, 1))));
  }
}

TEST_CASE("quadratic gradcheck is exact to 1e-6") {
  ParamStore ps;
  ps.add("x", mat(2, 2, {0.3, -1.2, 2.0, 0.7}));
  const auto r = finite_diff_check([&](Tape& t) {
    const Var x = t.param(ps.get("x"));
    return sum(mul(x, x));
  }, ps);
  CHECK(r.max_rel_error < 1e-6);
  CHECK(r.checked == 4);
  CHECK(ps.get("x").value == mat(2, 2, {0.3, -1.2, 2.0, 0.7}));
}

TEST_CASE("every differentiable op passes gradcheck") {
  const double tol = 1e-6;
  // Shift keeps leaky_relu, elu and abs away from their kinks.
  Matrix away = rand_mat(3, 4, 11);
  away = (away.array() >= 0).select(away.array() + 0.1, away.array() - 0.1).matrix();

  CHECK(check_binary([](Var a, Var b) { return matmul(a, b); }, rand_mat(3, 4, 1), rand_mat(4, 2, 2)) < tol);
  CHECK(check_binary([](Var a, Var b) { return add(a, b); }, rand_mat(2, 3, 1), rand_mat(2, 3, 2)) < tol);
  CHECK(check_binary([](Var a, Var b) { return sub(a, b); }, rand_mat(2, 3, 1), rand_mat(2, 3, 2)) < tol);
  CHECK(check_binary([](Var a, Var b) { return add_rowvec(a, b); }, rand_mat(3, 3, 1), rand_mat(1, 3, 2)) < tol);
  CHECK(check_binary([](Var a, Var b) { return mul(a, b); }, rand_mat(2, 3, 1), rand_mat(2, 3, 2)) < tol);
  CHECK(check_binary([](Var a, Var c) { return mul_colvec(a, c); }, rand_mat(3, 2, 1), rand_mat(3, 1, 2)) < tol);
  CHECK(check_binary([](Var a, Var b) { return concat(a, b, 1); }, rand_mat(2, 3, 1), rand_mat(2, 1, 2)) < tol);
  CHECK(check_binary([](Var a, Var b) { return concat(a, b, 0); }, rand_mat(2, 3, 1), rand_mat(1, 3, 2)) < tol);
  CHECK(check_unary([](Var a) { return scale(a, -2.5); }, rand_mat(2, 2, 4)) < tol);
  CHECK(check_unary([](Var a) { return slice(a, 1, 1, 2, 2); }, rand_mat(3, 4, 4)) < tol);
  CHECK(check_unary([](Var a) { return leaky_relu(a, 0.2); }, away) < tol);
  CHECK(check_unary([](Var a) { return elu(a); }, away) < tol);
  CHECK(check_unary([](Var a) { return abs(a); }, away) < tol);
  CHECK(check_unary([](Var a) { return sigmoid(a); }, rand_mat(2, 3, 5)) < tol);
  CHECK(check_unary([](Var a) { return tanh(a); }, rand_mat(2, 3, 5)) < tol);
  CHECK(check_unary([](Var a) { return softmax(a, 1); }, rand_mat(2, 4, 6)) < tol);
  CHECK(check_unary([](Var a) { return softmax(a, 0); }, rand_mat(3, 2, 6)) < tol);
  CHECK(check_unary([](Var a) { return row_max_pool(a); }, rand_mat(4, 3, 7)) < tol);
  CHECK(check_unary([](Var a) { return segment_max(a, {0, 1, 0, 1, 1}, 2); }, rand_mat(5, 3, 8)) < tol);
  CHECK(check_unary([](Var a) { return segment_sum(a, {2, 0, 0, 2}, 3); }, rand_mat(4, 2, 8)) < tol);
  CHECK(check_unary([](Var a) { return segment_softmax(a, {0, 0, 1, 0, 1}, 2); }, rand_mat(5, 1, 9)) < tol);
  CHECK(check_unary([](Var a) { return gather_rows(a, {2, 0, 2}); }, rand_mat(3, 2, 9)) < tol);
  CHECK(check_unary([](Var a) { return gather_entries(a, {0, 2, 1}, {1, 0, 1}); }, rand_mat(3, 2, 9)) < tol);
  CHECK(check_unary([](Var a) { return cross_entropy_with_logits(a, {0, 2}); }, rand_mat(2, 3, 10)) < tol);
  CHECK(check_unary([](Var a) { return binary_cross_entropy_with_logits(a, {1, 0, 1}); }, rand_mat(3, 1, 10)) <
        tol);
}

TEST_CASE("segment softmax normalizes within each segment") {
  Tape t;
  const Var s = segment_softmax(t.constant(mat(4, 1, {std::log(3.0), 0, 5, -1})), {0, 0, 1, 2}, 3);
  CHECK(s.value()(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(s.value()(1, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s.value()(2, 0) == 1.0);
  CHECK(s.value()(3, 0) == 1.0);
}

TEST_CASE("cross entropy matches its closed form") {
  Tape t;
  const double ce = cross_entropy_with_logits(t.constant(mat(1, 2, {0, 0})), {1}).scalar();
  CHECK(ce == doctest::Approx(std::log(2.0)));
  const double bce = binary_cross_entropy_with_logits(t.constant(mat(1, 1, {0})), {1}).scalar();
  CHECK(bce == doctest::Approx(std::log(2.0)));
  // Large logits stay finite.
  CHECK(std::isfinite(binary_cross_entropy_with_logits(t.constant(mat(1, 1, {-800})), {1}).scalar()));
  CHECK(std::isfinite(cross_entropy_with_logits(t.constant(mat(1, 2, {900, -900})), {1}).scalar()));
}

TEST_CASE("Adamax") {
  SUBCASE("zero gradient leaves parameters unchanged and advances t") {
    ParamStore ps;
    auto& p = ps.add("w", mat(1, 2, {0.5, -0.25}));
    Adamax opt;
    opt.step(ps);
    CHECK(opt.t() == 1);
    CHECK(p.value == mat(1, 2, {0.5, -0.25}));
  }
  SUBCASE("first step moves each entry by lr * g / (|g| + eps)") {
    ParamStore ps;
    auto& p = ps.add("w", mat(1, 2, {1.0, 1.0}));
    p.grad = mat(1, 2, {0.5, -2.0});
    const AdamaxConfig c;
    Adamax opt(c);
    opt.step(ps);
    // m = 0.1 g, u = |g|, step = lr / 0.1
    for (Index i = 0; i < 2; ++i) {
      const double g = mat(1, 2, {0.5, -2.0})(0, i);
      const double expected = 1.0 - (c.lr / (1.0 - c.beta1)) * ((1.0 - c.beta1) * g) / (std::abs(g) + c.eps);
      CHECK(p.value(0, i) == doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK(opt.u(0) == mat(1, 2, {0.5, 2.0}));
  }
  SUBCASE("minimizes a quadratic") {
    ParamStore ps;
    auto& p = ps.add("w", mat(1, 1, {3.0}));
    Adamax opt(AdamaxConfig{0.05});
    for (int i = 0; i < 2000; ++i) {
      ps.zero_grad();
      Tape t;
      const Var w = t.param(p);
      t.backward(sum(mul(w, w)));
      opt.step(ps);
    }
    CHECK(std::abs(p.value(0, 0)) < 0.05);
  }
}

TEST_CASE("initializers") {
  Rng a(42), b(42);
  CHECK(glorot_uniform(20, 30, a) == glorot_uniform(20, 30, b));
  const Matrix g = glorot_uniform(20, 30, a);
  CHECK(g.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 50.0));
  CHECK(uniform(5, 5, kEmbeddingInitLimit, a).cwiseAbs().maxCoeff() <= kEmbeddingInitLimit);
}

TEST_CASE("checkpoint round trip is bit-exact") {
  Rng rng(3);
  ParamStore ps;
  ps.add("embed", uniform(7, 5, 1e-3, rng));
  ps.add("w", glorot_uniform(5, 3, rng));
  ps.get("w").value(0, 0) = 0.1 + 0.2;  // not representable in short decimal
  ps.get("w").value(1, 1) = -0.0;
  ps.add("b", Matrix::Zero(1, 3));
  const std::string text = save_checkpoint(ps, {{"seed", 42}});
  const Checkpoint ck = load_checkpoint(text);
  REQUIRE(ck.params.size() == ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(ck.params[i].name == ps[i].name);
    CHECK(ck.params[i].value.rows() == ps[i].value.rows());
    CHECK(std::memcmp(ck.params[i].value.data(), ps[i].value.data(),
                      sizeof(double) * static_cast<std::size_t>(ps[i].value.size())) == 0);
  }
  CHECK(ck.meta["seed"] == 42);
  CHECK(save_checkpoint(ck.params, ck.meta) == text);

  auto doc = nlohmann::json::parse(text);
  doc["version"] = 7;
  CHECK_THROWS_AS(load_checkpoint(doc.dump()), CheckpointError);
  CHECK_THROWS_AS(load_checkpoint("{"), CheckpointError);
  auto short_data = nlohmann::json::parse(text);
  short_data["tensors"]["b"]["data"] = {1.0};
  CHECK_THROWS_AS(load_checkpoint(short_data.dump()), CheckpointError);
}

TEST_CASE("param store") {
  ParamStore ps;
  ps.add("a", Matrix::Ones(2, 2));
  CHECK_THROWS(ps.add("a", Matrix::Ones(1, 1)));
  CHECK(ps.find("b") == nullptr);
  CHECK(ps.scalar_count() == 4);
  auto copy = ps.clone();
  copy.get("a").value(0, 0) = 9;
  CHECK(ps.get("a").value(0, 0) == 1);
}

}  // TEST_SUITE
