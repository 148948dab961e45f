#pragma once

#include <functional>
#include <string>

#include "mfgnn/tensor/tape.hpp"

namespace mfgnn::tensor {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  Index worst_index = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
};

/// Builds a scalar loss on the given tape from the current parameter values.
using LossFn = std::function<Var(Tape&)>;

/// |a - n| / max(|a|, |n|, 1e-8).
double relative_error(double analytic, double numeric);

/// Compares backward() gradients with central differences
/// (f(p+h) - f(p-h)) / 2h for every scalar of every parameter in `params`.
/// Parameter values are restored afterwards; gradient slots hold the analytic
/// gradient.
GradCheckResult finite_diff_check(const LossFn& loss, ParamStore& params, double h = 1e-5);

}  // namespace mfgnn::tensor
