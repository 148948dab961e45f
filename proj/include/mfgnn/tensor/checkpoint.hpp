#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "mfgnn/tensor/tape.hpp"

namespace mfgnn::tensor {

class CheckpointError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointVersion = 1;

/// JSON `{version, meta, tensors: {name: {shape: [r, c], data: [...]}}}` with
/// row-major data. Doubles are written in shortest round-trip form.
std::string save_checkpoint(const ParamStore& params, const nlohmann::json& meta = nlohmann::json::object());

struct Checkpoint {
  ParamStore params;
  nlohmann::json meta;
};

/// Throws CheckpointError on malformed input or a version mismatch.
Checkpoint load_checkpoint(std::string_view text);

}  // namespace mfgnn::tensor
