#include "mfgnn/tensor/checkpoint.hpp"

namespace mfgnn::tensor {

using nlohmann::json;

std::string save_checkpoint(const ParamStore& params, const json& meta) {
  json tensors = json::object();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Parameter& p = params[k];
    tensors[p.name] = {{"shape", {p.value.rows(), p.value.cols()}},
                       {"data", std::vector<double>(p.value.data(), p.value.data() + p.value.size())}};
  }
  // tensors is an object (sorted keys); keep the insertion order separately
  json order = json::array();
  for (std::size_t k = 0; k < params.size(); ++k) order.push_back(params[k].name);
  return json{{"version", kCheckpointVersion}, {"meta", meta}, {"order", order}, {"tensors", tensors}}.dump();
}

Checkpoint load_checkpoint(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CheckpointError(std::string("checkpoint is not JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("version", -1) != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version (expected 1)");
  }
  if (!j.contains("tensors") || !j["tensors"].is_object() || !j.contains("order") || !j["order"].is_array()) {
    throw CheckpointError("checkpoint needs \"tensors\" and \"order\"");
  }
  Checkpoint out;
  out.meta = j.value("meta", json::object());
  for (const auto& name_j : j["order"]) {
    const std::string name = name_j.get<std::string>();
    if (!j["tensors"].contains(name)) throw CheckpointError("missing tensor '" + name + "'");
    const json& t = j["tensors"][name];
    try {
      const auto shape = t.at("shape").get<std::vector<Index>>();
      const auto data = t.at("data").get<std::vector<double>>();
      if (shape.size() != 2 || shape[0] < 0 || shape[1] < 0 ||
          static_cast<std::size_t>(shape[0] * shape[1]) != data.size()) {
        throw CheckpointError("tensor '" + name + "': data length does not match shape");
      }
      Matrix m(shape[0], shape[1]);
      std::copy(data.begin(), data.end(), m.data());
      out.params.add(name, std::move(m));
    } catch (const json::exception& e) {
      throw CheckpointError("tensor '" + name + "': " + e.what());
    }
  }
  return out;
}

}  // namespace mfgnn::tensor
