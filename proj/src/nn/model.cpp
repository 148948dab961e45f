#include "mfgnn/nn/model.hpp"

namespace mfgnn::nn {

using tensor::Tape;

std::string_view to_string(Task task) { return task == Task::Classify ? "classify" : "clone"; }

Task task_from_string(std::string_view name) {
  if (name == "classify") return Task::Classify;
  if (name == "clone") return Task::Clone;
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

int layer_width(const ModelDims& dims, const AblationConfig& config, int layer) {
  return config.combine == Combine::Concat ? dims.hidden << (layer - 1) : dims.hidden;
}

int program_width(const ModelDims& dims, const AblationConfig& config) {
  return config.combine == Combine::Concat ? dims.hidden << dims.layers : dims.hidden;
}

std::vector<std::pair<std::string, std::pair<int, int>>> parameter_shapes(const ModelDims& d,
                                                                          const AblationConfig& c,
                                                                          Task task) {
  std::vector<std::pair<std::string, std::pair<int, int>>> out;
  if (c.block_repr == BlockRepr::Ast) {
    out.push_back({"embedding", {d.vocab, d.embed}});
    out.push_back({"tbcnn.W_t", {d.embed, d.hidden}});
    out.push_back({"tbcnn.W_l", {d.embed, d.hidden}});
    out.push_back({"tbcnn.W_r", {d.embed, d.hidden}});
    out.push_back({"tbcnn.b", {1, d.hidden}});
  } else {
    out.push_back({"bow.W", {d.vocab, d.hidden}});
  }
  for (int l = 1; l <= d.layers; ++l) {
    const int w = layer_width(d, c, l);
    const std::string prefix = "agn4d." + std::to_string(l) + ".";
    out.push_back({prefix + "W_key_o", {w, w}});
    out.push_back({prefix + "W_key_r", {w, w}});
    if (c.aggregator == Aggregator::Agn4d) {
      out.push_back({prefix + "P_src", {w, 1}});
      out.push_back({prefix + "P_dst", {w, edge_kind_columns(c.edge_typing)}});
    }
  }
  const int pw = program_width(d, c);
  if (task == Task::Classify) {
    out.push_back({"classifier.W", {pw, d.classes}});
    out.push_back({"classifier.b", {1, d.classes}});
  } else {
    out.push_back({"clone.W_o", {pw, 1}});
    out.push_back({"clone.b_o", {1, 1}});
  }
  return out;
}

MfgnnModel::MfgnnModel(ModelDims dims, AblationConfig config, Task task, std::uint64_t seed)
    : dims_(dims), config_(config), task_(task) {
  config_.validate();
  if (task == Task::Classify && dims.classes < 2) throw ConfigError("classification needs at least 2 classes");
  tensor::Rng rng(seed);
  for (const auto& [name, shape] : parameter_shapes(dims_, config_, task_)) {
    const auto [rows, cols] = shape;
    Matrix value;
    if (name == "embedding") {
      value = tensor::uniform<double>(rows, cols, tensor::kEmbeddingInitLimit, rng);
    } else if (rows == 1) {
      value = Matrix::Zero(rows, cols);  // biases
    } else {
      value = tensor::glorot_uniform<double>(rows, cols, rng);
    }
    params_.add(name, std::move(value));
  }
}

MfgnnModel::MfgnnModel(ModelDims dims, AblationConfig config, Task task, tensor::ParamStore params)
    : dims_(dims), config_(config), task_(task), params_(std::move(params)) {
  config_.validate();
  check_shapes();
}

void MfgnnModel::check_shapes() const {
  for (const auto& [name, shape] : parameter_shapes(dims_, config_, task_)) {
    const tensor::Parameter* p = params_.find(name);
    if (p == nullptr) throw ConfigError("missing parameter '" + name + "'");
    if (p->value.rows() != shape.first || p->value.cols() != shape.second) {
      throw tensor::ShapeError("parameter '" + name + "' is " + tensor::shape_str(p->value) +
                               ", expected " + std::to_string(shape.first) + "x" +
                               std::to_string(shape.second));
    }
  }
}

Var MfgnnModel::local_features(Tape& tape, const EncodedGraph& g) {
  if (config_.block_repr == BlockRepr::Bow) {
    if (g.bow.cols() != dims_.vocab) throw tensor::ShapeError::of("bow_forward", g.bow, params_.get("bow.W").value);
    return bow_forward(g, tape.param(params_.get("bow.W")));
  }
  TbcnnVars p{tape.param(params_.get("embedding")), tape.param(params_.get("tbcnn.W_t")),
              tape.param(params_.get("tbcnn.W_l")), tape.param(params_.get("tbcnn.W_r")),
              tape.param(params_.get("tbcnn.b"))};
  return tbcnn_forward(g, p);
}

Var MfgnnModel::contextual_features(Tape& tape, Var local, const EncodedGraph& g, ForwardTrace* trace) {
  const DirectedEdges original = select_edges(g.edges, config_, false);
  const DirectedEdges reverse = select_edges(g.edges, config_, true);
  Var h = local;
  for (int l = 1; l <= dims_.layers; ++l) {
    const std::string prefix = "agn4d." + std::to_string(l) + ".";
    AgnLayerVars p{tape.param(params_.get(prefix + "W_key_o")), tape.param(params_.get(prefix + "W_key_r")),
                   {}, {}};
    if (config_.aggregator == Aggregator::Agn4d) {
      p.p_src = tape.param(params_.get(prefix + "P_src"));
      p.p_dst = tape.param(params_.get(prefix + "P_dst"));
    }
    LayerTrace* lt = nullptr;
    if (trace != nullptr) lt = &trace->layers.emplace_back();
    h = agn4d_layer(h, original, reverse, p, config_, lt);
  }
  return h;
}

Var MfgnnModel::program_vector(Tape& tape, const EncodedGraph& g, ForwardTrace* trace) {
  Var local = local_features(tape, g);
  const Var contextual = contextual_features(tape, local, g, trace);
  if (contextual.cols() > local.cols()) {
    // concatenation keeps H^0 in the rightmost columns; align local features with it
    local = tensor::concat(tape.constant(Matrix::Zero(local.rows(), contextual.cols() - local.cols())), local, 1);
  }
  return fuse_and_pool(local, contextual);
}

Var MfgnnModel::class_logits(Tape& tape, Var v) {
  return nn::class_logits(v, tape.param(params_.get("classifier.W")), tape.param(params_.get("classifier.b")));
}

Var MfgnnModel::clone_logit(Tape& tape, Var v1, Var v2) {
  return nn::clone_logit(v1, v2, tape.param(params_.get("clone.W_o")), tape.param(params_.get("clone.b_o")));
}

Matrix MfgnnModel::program_vector_value(const EncodedGraph& g) {
  Tape tape;
  return program_vector(tape, g).value();
}

std::vector<double> MfgnnModel::classify(const EncodedGraph& g) {
  return nn::classify(program_vector_value(g), params_.get("classifier.W").value,
                      params_.get("classifier.b").value);
}

double MfgnnModel::clone_score(const EncodedGraph& a, const EncodedGraph& b) {
  return nn::clone_score(program_vector_value(a), program_vector_value(b), params_.get("clone.W_o").value,
                         params_.get("clone.b_o").value);
}

nlohmann::json MfgnnModel::describe() const {
  return {{"dims",
           {{"vocab", dims_.vocab},
            {"embed", dims_.embed},
            {"hidden", dims_.hidden},
            {"layers", dims_.layers},
            {"classes", dims_.classes}}},
          {"config", config_.to_text()},
          {"task", to_string(task_)}};
}

}  // namespace mfgnn::nn
