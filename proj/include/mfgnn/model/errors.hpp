#pragma once

#include <stdexcept>

namespace mfgnn::model {

/// A CodeGraph violates its invariants.
class GraphError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched-version interchange data.
class FormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mfgnn::model
