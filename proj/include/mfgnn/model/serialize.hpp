#pragma once

#include <string>
#include <string_view>

#include "mfgnn/model/code_graph.hpp"

namespace mfgnn::model {

inline constexpr int kCodeGraphVersion = 1;

/// CodeGraph JSON v1.
std::string serialize(const CodeGraph& graph);
/// Throws FormatError on a version mismatch or schema violation; the result
/// passes validate().
CodeGraph deserialize(std::string_view text);

}  // namespace mfgnn::model
