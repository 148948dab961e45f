#pragma once

#include <string>
#include <vector>

#include "mfgnn/train/trainer.hpp"

namespace mfgnn::train {

struct AblationRow {
  nn::AblationConfig config;
  Metrics test;
  int best_epoch = 0;
};

/// Trains and tests every configuration with the same seed and split.
std::vector<AblationRow> run_ablation(const std::vector<nn::AblationConfig>& configs, const Dataset& data,
                                      const TrainConfig& base);

/// The full model plus the edge-subset, aggregator and combination variants.
std::vector<nn::AblationConfig> default_ablation_matrix();

/// Fixed-width comparison table, one row per configuration.
std::string format_ablation_table(const std::vector<AblationRow>& rows);

nlohmann::json ablation_to_json(const std::vector<AblationRow>& rows, std::uint64_t seed);

}  // namespace mfgnn::train
