#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfgnn::nn {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BlockRepr { Ast, Bow };
enum class EdgeSubset { Control, Dataflow, Both };
enum class EdgeTyping { Multi, Single };
enum class Combine { Sum, Concat };
enum class Aggregator { Agn4d, Gcn };

/// One point of the ablation matrix. The default is the full model:
/// AST blocks, control and dataflow edges, typed edges, summation, AGN4D.
struct AblationConfig {
  BlockRepr block_repr = BlockRepr::Ast;
  EdgeSubset edges = EdgeSubset::Both;
  EdgeTyping edge_typing = EdgeTyping::Multi;
  Combine combine = Combine::Sum;
  Aggregator aggregator = Aggregator::Agn4d;

  friend bool operator==(const AblationConfig&, const AblationConfig&) = default;

  /// Throws ConfigError for combinations outside the ablation matrix
  /// (concatenation is only defined for the attention aggregator).
  void validate() const;

  /// Short tag such as `A+C+D+M`, with `/concat` and `/gcn` suffixes when set.
  std::string name() const;

  /// `key=value` lines, the format read by parse().
  std::string to_text() const;
  /// Flat key-value text: keys block_repr, edges, edge_typing, combine,
  /// aggregator; `#` starts a comment; omitted keys keep their default.
  static AblationConfig parse(std::string_view text);
  /// Accepts the short tag form, e.g. `B+C+D+M` or `A+C+D+M/gcn`.
  static AblationConfig from_name(std::string_view name);
};

}  // namespace mfgnn::nn
