#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfgnn/tensor/gradcheck.hpp"

namespace mfgnn::nn {

struct GradCheckRow {
  std::string layer;
  tensor::GradCheckResult result;
  double seconds = 0.0;
};

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-4;

/// Finite-difference checks on seeded random fixtures, one row per layer
/// type: tbcnn, agn4d layers 1-3, gcn, bow, fusion+classifier, clone head,
/// full model.
std::vector<GradCheckRow> run_gradcheck_suite(std::uint64_t seed, double h = kGradCheckStep);

}  // namespace mfgnn::nn
