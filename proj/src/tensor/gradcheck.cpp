#include "mfgnn/tensor/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace mfgnn::tensor {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

namespace {

double evaluate(const LossFn& loss) {
  Tape tape;
  return loss(tape).scalar();
}

}  // namespace

GradCheckResult finite_diff_check(const LossFn& loss, ParamStore& params, double h) {
  params.zero_grad();
  {
    Tape tape;
    tape.backward(loss(tape));
  }
  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = params[k];
    for (Index i = 0; i < p.value.size(); ++i) {
      double& x = p.value.data()[i];
      const double saved = x;
      x = saved + h;
      const double plus = evaluate(loss);
      x = saved - h;
      const double minus = evaluate(loss);
      x = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double analytic = p.grad.data()[i];
      const double err = relative_error(analytic, numeric);
      ++result.checked;
      if (err > result.max_rel_error || result.worst_index < 0) {
        result.max_rel_error = std::max(err, result.max_rel_error);
        result.worst_param = p.name;
        result.worst_index = i;
        result.worst_analytic = analytic;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace mfgnn::tensor
