#pragma once

#include <cstdint>
#include <vector>

#include "mfgnn/nn/model.hpp"
#include "mfgnn/tensor/adamax.hpp"
#include "mfgnn/train/dataset.hpp"
#include "mfgnn/train/metrics.hpp"

namespace mfgnn::train {

struct TrainConfig {
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 42;
  int embed = 50;
  int hidden = 200;
  int layers = 3;
  nn::AblationConfig ablation;
  tensor::AdamaxConfig adamax;
  /// Stops once the validation metric is 1.0; later epochs could only tie,
  /// and ties keep the earliest epoch.
  bool stop_at_perfect = true;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double train_metric = 0.0;
  double val_metric = 0.0;
};

struct TrainResult {
  nn::MfgnnModel model;
  int best_epoch = 0;
  double best_val = 0.0;
  std::vector<EpochLog> history;
};

struct Predictions {
  std::vector<int> preds;
  std::vector<int> labels;
  /// Probability of class 1 (binary tasks) per sample.
  std::vector<double> scores;
};

Predictions predict(nn::MfgnnModel& model, const Dataset& data, const EncodedDataset& enc,
                    const std::vector<std::size_t>& samples);
Metrics evaluate(nn::MfgnnModel& model, const Dataset& data, const EncodedDataset& enc,
                 const std::vector<std::size_t>& samples);
/// Selection metric: accuracy for classification, positive-class F1 for clones.
double selection_metric(nn::Task task, const Metrics& m);

/// Adamax on mean cross-entropy (or binary cross-entropy for clone pairs) in
/// shuffled mini-batches; returns the parameters of the best validation epoch.
TrainResult train_model(const TrainConfig& config, const Dataset& data, const EncodedDataset& enc,
                        const std::vector<std::size_t>& train, const std::vector<std::size_t>& val);

struct RunResult {
  Split split;
  EncodedDataset encoded;
  TrainResult trained;
  Metrics test;
};

/// split -> vocabulary from the training split -> train -> test metrics.
RunResult run_experiment(const Dataset& data, const TrainConfig& config);

/// Checkpoint JSON holding the weights plus everything needed to rebuild the
/// model and re-encode graphs.
std::string make_checkpoint(const nn::MfgnnModel& model, const model::Vocabulary& vocab,
                            const TrainConfig& config, const RunResult* run = nullptr);

struct LoadedModel {
  nn::MfgnnModel model;
  model::Vocabulary vocab;
  std::uint64_t seed = 0;
  nlohmann::json meta;
};
LoadedModel load_model_checkpoint(std::string_view text);

}  // namespace mfgnn::train
