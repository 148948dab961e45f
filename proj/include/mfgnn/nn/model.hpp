#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfgnn/nn/layers.hpp"
#include "mfgnn/tensor/init.hpp"
#include "mfgnn/tensor/tape.hpp"

namespace mfgnn::nn {

enum class Task { Classify, Clone };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

struct ModelDims {
  int vocab = 1;
  int embed = 50;
  int hidden = 200;
  int layers = 3;
  /// Classification only; ≥ 2.
  int classes = 2;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Width of layer l's input (l from 1): hidden, doubled per layer under concatenation.
int layer_width(const ModelDims& dims, const AblationConfig& config, int layer);
/// Width of the program vector.
int program_width(const ModelDims& dims, const AblationConfig& config);

struct ForwardTrace {
  std::vector<LayerTrace> layers;
};

/// All learned weights plus the forward passes for one configuration.
class MfgnnModel {
 public:
  /// Initializes every parameter from `seed`.
  MfgnnModel(ModelDims dims, AblationConfig config, Task task, std::uint64_t seed);
  /// Adopts existing parameter values (e.g. from a checkpoint); shapes are checked.
  MfgnnModel(ModelDims dims, AblationConfig config, Task task, tensor::ParamStore params);

  const ModelDims& dims() const { return dims_; }
  const AblationConfig& config() const { return config_; }
  Task task() const { return task_; }
  tensor::ParamStore& params() { return params_; }
  const tensor::ParamStore& params() const { return params_; }

  Var local_features(tensor::Tape& tape, const EncodedGraph& g);
  /// H_L after all graph layers.
  Var contextual_features(tensor::Tape& tape, Var local, const EncodedGraph& g,
                          ForwardTrace* trace = nullptr);
  Var program_vector(tensor::Tape& tape, const EncodedGraph& g, ForwardTrace* trace = nullptr);
  Var class_logits(tensor::Tape& tape, Var v);
  Var clone_logit(tensor::Tape& tape, Var v1, Var v2);

  Matrix program_vector_value(const EncodedGraph& g);
  std::vector<double> classify(const EncodedGraph& g);
  double clone_score(const EncodedGraph& a, const EncodedGraph& b);

  /// dims, config and task for checkpoint metadata.
  nlohmann::json describe() const;

 private:
  void check_shapes() const;

  ModelDims dims_;
  AblationConfig config_;
  Task task_;
  tensor::ParamStore params_;
};

/// Parameter shapes of a configuration, in creation order.
std::vector<std::pair<std::string, std::pair<int, int>>> parameter_shapes(const ModelDims& dims,
                                                                          const AblationConfig& config,
                                                                          Task task);

}  // namespace mfgnn::nn
