#include "mfgnn/train/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "mfgnn/ir/cfg.hpp"
#include "mfgnn/lang/errors.hpp"
#include "mfgnn/lang/parser.hpp"

namespace mfgnn::train {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string required_string(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw DataError("manifest line " + std::to_string(line) + ": missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

// The source pointers refer into a ProgramAst that dies with load_program.
void drop_sources(model::TreeNode& n) {
  n.source = nullptr;
  for (auto& c : n.children) drop_sources(c);
}

}  // namespace

DatasetManifest parse_manifest(std::string_view text, const fs::path& base) {
  DatasetManifest m;
  m.base = base;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  bool task_known = false;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw DataError("manifest line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object()) throw DataError("manifest line " + std::to_string(line) + ": expected an object");
    const bool pair = j.contains("a");
    if (!task_known) {
      m.task = pair ? nn::Task::Clone : nn::Task::Classify;
      task_known = true;
    } else if (pair != (m.task == nn::Task::Clone)) {
      throw DataError("manifest line " + std::to_string(line) + ": mixes program and pair entries");
    }
    ManifestEntry e;
    if (pair) {
      e.a = required_string(j, "a", line);
      e.b = required_string(j, "b", line);
    } else {
      e.a = required_string(j, "path", line);
    }
    if (!j.contains("label") || !j["label"].is_number_integer()) {
      throw DataError("manifest line " + std::to_string(line) + ": missing integer field 'label'");
    }
    e.label = j["label"].get<int>();
    if (e.label < 0 || (pair && e.label > 1)) {
      throw DataError("manifest line " + std::to_string(line) + ": label out of range");
    }
    if (std::find(m.entries.begin(), m.entries.end(), e) != m.entries.end()) {
      throw DataError("manifest line " + std::to_string(line) + ": duplicate entry");
    }
    m.entries.push_back(std::move(e));
  }
  if (m.entries.empty()) throw DataError("manifest has no entries");
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("manifest not found: '" + path.string() + "'");
  return parse_manifest(read_file(path), path.parent_path());
}

model::CodeGraph load_program(const fs::path& path, std::optional<int> label) {
  if (!fs::exists(path)) throw DataError("program not found: '" + path.string() + "'");
  const std::string text = read_file(path);
  try {
    const lang::ProgramAst program = lang::parse_source(text);
    model::CodeGraph graph = model::build_code_graph(program, label);
    for (auto& b : graph.blocks) drop_sources(b.root);
    return graph;
  } catch (const lang::FrontendError& e) {
    throw SourceError(lang::format_diagnostic(path.string(), e));
  } catch (const ir::CfgError& e) {
    throw SourceError(lang::format_diagnostic(path.string(), e.line(), e.column(), "error", e.what()));
  }
}

Dataset load_dataset(const DatasetManifest& manifest) {
  Dataset data;
  data.task = manifest.task;
  std::map<std::string, int> index;
  auto graph_of = [&](const std::string& rel) {
    const fs::path full = (manifest.base / rel).lexically_normal();
    const std::string key = full.string();
    if (auto it = index.find(key); it != index.end()) return it->second;
    const int id = static_cast<int>(data.graphs.size());
    data.graphs.push_back(load_program(full));
    data.files.push_back(key);
    index.emplace(key, id);
    return id;
  };
  int max_label = 1;
  for (const auto& e : manifest.entries) {
    Sample s;
    s.a = graph_of(e.a);
    if (manifest.task == nn::Task::Clone) s.b = graph_of(e.b);
    s.label = e.label;
    max_label = std::max(max_label, e.label);
    data.samples.push_back(s);
  }
  data.classes = manifest.task == nn::Task::Clone ? 2 : max_label + 1;
  if (manifest.task == nn::Task::Classify) {
    for (const auto& s : data.samples) data.graphs[static_cast<std::size_t>(s.a)].label = s.label;
  }
  return data;
}

Split split_dataset(std::size_t n, std::uint64_t seed) {
  if (n < 5) throw DataError("need at least 5 samples to split, got " + std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_train = n * 3 / 5;
  const std::size_t n_val = n / 5;
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<long>(n_train));
  s.val.assign(order.begin() + static_cast<long>(n_train), order.begin() + static_cast<long>(n_train + n_val));
  s.test.assign(order.begin() + static_cast<long>(n_train + n_val), order.end());
  return s;
}

EncodedDataset encode_dataset(const Dataset& data, model::Vocabulary vocab) {
  EncodedDataset enc;
  enc.vocab = std::move(vocab);
  enc.vocab.freeze();
  enc.graphs.reserve(data.graphs.size());
  for (const auto& g : data.graphs) enc.graphs.push_back(nn::encode(g, enc.vocab));
  return enc;
}

EncodedDataset encode_dataset(const Dataset& data, const std::vector<std::size_t>& vocab_samples) {
  std::vector<bool> used(data.graphs.size(), false);
  for (std::size_t i : vocab_samples) {
    const Sample& s = data.samples.at(i);
    used[static_cast<std::size_t>(s.a)] = true;
    if (s.b >= 0) used[static_cast<std::size_t>(s.b)] = true;
  }
  std::vector<const model::BlockAst*> corpus;
  for (std::size_t g = 0; g < data.graphs.size(); ++g) {
    if (!used[g]) continue;
    for (const auto& b : data.graphs[g].blocks) corpus.push_back(&b);
  }
  return encode_dataset(data, model::build_vocab(corpus));
}

}  // namespace mfgnn::train
