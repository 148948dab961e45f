#include "mfgnn/model/vocabulary.hpp"

#include <functional>
#include <sstream>

namespace mfgnn::model {

Vocabulary::Vocabulary() { add(kUnk); }

int Vocabulary::add(std::string_view token) {
  if (auto it = index_.find(std::string(token)); it != index_.end()) return it->second;
  if (frozen_) return kUnkIndex;
  const int id = static_cast<int>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

int Vocabulary::index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkIndex : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) != 0;
}

std::string Vocabulary::serialize() const {
  std::string out;
  for (const auto& t : tokens_) out += t + "\n";
  return out;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.empty() || tokens.front() != kUnk) throw FormatError("vocabulary must start with <UNK>");
  Vocabulary v;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].empty() || v.contains(tokens[i])) {
      throw FormatError("vocabulary line " + std::to_string(i + 1) + ": empty or duplicate token");
    }
    v.add(tokens[i]);
  }
  v.freeze();
  return v;
}

Vocabulary Vocabulary::deserialize(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) tokens.push_back(line);
  return from_tokens(tokens);
}

Vocabulary build_vocab(const std::vector<const BlockAst*>& corpus) {
  Vocabulary v;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& n) {
    v.add(n.label);
    for (const auto& c : n.children) walk(c);
  };
  for (const BlockAst* b : corpus) walk(b->root);
  v.freeze();
  return v;
}

}  // namespace mfgnn::model
