#include "mfgnn/train/trainer.hpp"

#include <algorithm>
#include <random>

#include "mfgnn/tensor/checkpoint.hpp"
#include "mfgnn/tensor/ops.hpp"

namespace mfgnn::train {

using nlohmann::json;
using tensor::Tape;
using tensor::Var;

namespace {

// Per-epoch shuffling draws from its own stream so that it does not perturb
// parameter initialization under the same seed.
constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ULL;

Var sample_loss(nn::MfgnnModel& model, Tape& tape, const EncodedDataset& enc, const Sample& s) {
  const auto& ga = enc.graphs.at(static_cast<std::size_t>(s.a));
  if (model.task() == nn::Task::Classify) {
    return tensor::cross_entropy_with_logits(model.class_logits(tape, model.program_vector(tape, ga)), {s.label});
  }
  const auto& gb = enc.graphs.at(static_cast<std::size_t>(s.b));
  const Var logit = model.clone_logit(tape, model.program_vector(tape, ga), model.program_vector(tape, gb));
  return tensor::binary_cross_entropy_with_logits(logit, {s.label});
}

}  // namespace

Predictions predict(nn::MfgnnModel& model, const Dataset& data, const EncodedDataset& enc,
                    const std::vector<std::size_t>& samples) {
  Predictions out;
  for (std::size_t i : samples) {
    const Sample& s = data.samples.at(i);
    const auto& ga = enc.graphs.at(static_cast<std::size_t>(s.a));
    out.labels.push_back(s.label);
    if (model.task() == nn::Task::Classify) {
      const auto probs = model.classify(ga);
      const auto best = std::max_element(probs.begin(), probs.end()) - probs.begin();
      out.preds.push_back(static_cast<int>(best));
      if (probs.size() == 2) out.scores.push_back(probs[1]);
    } else {
      const double p = model.clone_score(ga, enc.graphs.at(static_cast<std::size_t>(s.b)));
      out.preds.push_back(p >= 0.5 ? 1 : 0);
      out.scores.push_back(p);
    }
  }
  return out;
}

Metrics evaluate(nn::MfgnnModel& model, const Dataset& data, const EncodedDataset& enc,
                 const std::vector<std::size_t>& samples) {
  const Predictions p = predict(model, data, enc, samples);
  return compute_metrics(p.preds, p.labels, model.dims().classes, p.scores);
}

double selection_metric(nn::Task task, const Metrics& m) {
  return task == nn::Task::Classify ? m.accuracy : m.per_class.at(1).f1;
}

TrainResult train_model(const TrainConfig& config, const Dataset& data, const EncodedDataset& enc,
                        const std::vector<std::size_t>& train, const std::vector<std::size_t>& val) {
  if (train.empty()) throw DataError("empty training split");
  if (config.batch_size < 1) throw std::invalid_argument("batch size must be positive");
  nn::ModelDims dims;
  dims.vocab = static_cast<int>(enc.vocab.size());
  dims.embed = config.embed;
  dims.hidden = config.hidden;
  dims.layers = config.layers;
  dims.classes = data.task == nn::Task::Clone ? 2 : data.classes;
  nn::MfgnnModel model(dims, config.ablation, data.task, config.seed);
  tensor::Adamax optimizer(config.adamax);
  std::mt19937_64 rng(config.seed ^ kShuffleStream);
  const auto& select_on = val.empty() ? train : val;

  auto& params = model.params();
  std::vector<tensor::Matrix> best;
  int best_epoch = 0;
  double best_val = -1.0;
  std::vector<EpochLog> history;
  std::vector<std::size_t> order = train;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double inv = 1.0 / static_cast<double>(end - start);
      params.zero_grad();
      for (std::size_t k = start; k < end; ++k) {
        Tape tape;
        const Var loss = sample_loss(model, tape, enc, data.samples.at(order[k]));
        loss_total += loss.scalar();
        tape.backward(tensor::scale(loss, inv));
      }
      optimizer.step(params);
    }
    EpochLog log;
    log.epoch = epoch;
    log.loss = loss_total / static_cast<double>(order.size());
    log.train_metric = selection_metric(data.task, evaluate(model, data, enc, train));
    log.val_metric = selection_metric(data.task, evaluate(model, data, enc, select_on));
    history.push_back(log);
    if (log.val_metric > best_val) {
      best_val = log.val_metric;
      best_epoch = epoch;
      best.clear();
      for (std::size_t i = 0; i < params.size(); ++i) best.push_back(params[i].value);
    }
    if (config.stop_at_perfect && best_val >= 1.0) break;
  }
  if (!best.empty()) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i].value = best[i];
  }
  params.zero_grad();
  return TrainResult{std::move(model), best_epoch, best_val, std::move(history)};
}

RunResult run_experiment(const Dataset& data, const TrainConfig& config) {
  Split split = split_dataset(data.samples.size(), config.seed);
  EncodedDataset encoded = encode_dataset(data, split.train);
  TrainResult trained = train_model(config, data, encoded, split.train, split.val);
  Metrics test = evaluate(trained.model, data, encoded, split.test);
  return RunResult{std::move(split), std::move(encoded), std::move(trained), std::move(test)};
}

std::string make_checkpoint(const nn::MfgnnModel& model, const model::Vocabulary& vocab,
                            const TrainConfig& config, const RunResult* run) {
  json meta = model.describe();
  meta["seed"] = config.seed;
  meta["epochs"] = config.epochs;
  meta["batch_size"] = config.batch_size;
  meta["vocab_tokens"] = vocab.tokens();
  if (run != nullptr) {
    meta["best_epoch"] = run->trained.best_epoch;
    meta["test_metrics"] = run->test.to_json();
  }
  return tensor::save_checkpoint(model.params(), meta);
}

LoadedModel load_model_checkpoint(std::string_view text) {
  tensor::Checkpoint ck = tensor::load_checkpoint(text);
  const json& meta = ck.meta;
  try {
    nn::ModelDims dims;
    const json& d = meta.at("dims");
    dims.vocab = d.at("vocab").get<int>();
    dims.embed = d.at("embed").get<int>();
    dims.hidden = d.at("hidden").get<int>();
    dims.layers = d.at("layers").get<int>();
    dims.classes = d.at("classes").get<int>();
    const auto config = nn::AblationConfig::parse(meta.at("config").get<std::string>());
    const auto task = nn::task_from_string(meta.at("task").get<std::string>());
    auto vocab = model::Vocabulary::from_tokens(meta.at("vocab_tokens").get<std::vector<std::string>>());
    return LoadedModel{nn::MfgnnModel(dims, config, task, std::move(ck.params)), std::move(vocab),
                       meta.at("seed").get<std::uint64_t>(), meta};
  } catch (const json::exception& e) {
    throw tensor::CheckpointError(std::string("checkpoint metadata: ") + e.what());
  }
}

}  // namespace mfgnn::train
