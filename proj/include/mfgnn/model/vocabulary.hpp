#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mfgnn/model/block_ast.hpp"
#include "mfgnn/model/errors.hpp"

namespace mfgnn::model {

/// Dense token index with UNK at 0. While open, `add` grows it; once frozen,
/// unknown tokens map to UNK.
class Vocabulary {
 public:
  static constexpr std::string_view kUnk = "<UNK>";
  static constexpr int kUnkIndex = 0;

  Vocabulary();

  int add(std::string_view token);
  int index(std::string_view token) const;
  const std::string& token(int index) const { return tokens_.at(static_cast<std::size_t>(index)); }
  bool contains(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// One token per line; line 1 is `<UNK>`.
  std::string serialize() const;
  /// Result is frozen. Throws FormatError.
  static Vocabulary deserialize(std::string_view text);
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.frozen_ == b.frozen_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  bool frozen_ = false;
};

/// Every label of every tree, in first-seen pre-order; frozen.
Vocabulary build_vocab(const std::vector<const BlockAst*>& corpus);

}  // namespace mfgnn::model
