#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfgnn/model/code_graph.hpp"
#include "mfgnn/nn/encode.hpp"
#include "mfgnn/nn/model.hpp"

namespace mfgnn::train {

/// Missing files, malformed manifests, or graphs violating their invariants.
class DataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A program that does not compile; what() is a `file:line:col: error: ...`
/// diagnostic.
class SourceError : public DataError {
  using DataError::DataError;
};

struct ManifestEntry {
  std::string a;
  std::string b;  // clone pairs only
  int label = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// JSON lines: `{"path": ..., "label": k}` for classification,
/// `{"a": ..., "b": ..., "label": 0|1}` for clone pairs. Relative paths are
/// resolved against the manifest's directory.
struct DatasetManifest {
  nn::Task task = nn::Task::Classify;
  std::vector<ManifestEntry> entries;
  std::filesystem::path base;
};

/// Task is inferred from the first entry's keys. Throws DataError.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base);

/// One program file as a CodeGraph. Throws DataError when the file is
/// missing and SourceError when it does not compile.
model::CodeGraph load_program(const std::filesystem::path& path, std::optional<int> label = std::nullopt);

struct Sample {
  int a = 0;
  int b = -1;  // clone pairs only
  int label = 0;
};

/// Graphs of every distinct file plus samples referencing them.
struct Dataset {
  nn::Task task = nn::Task::Classify;
  int classes = 2;
  std::vector<std::string> files;
  std::vector<model::CodeGraph> graphs;
  std::vector<Sample> samples;
};

Dataset load_dataset(const DatasetManifest& manifest);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of 0..n-1 cut into ⌊0.6n⌋ / ⌊0.2n⌋ / remainder. Needs n ≥ 5.
Split split_dataset(std::size_t n, std::uint64_t seed);

struct EncodedDataset {
  model::Vocabulary vocab;
  std::vector<nn::EncodedGraph> graphs;
};

/// Vocabulary from the graphs the given samples reference (the training
/// split), then every graph encoded with it.
EncodedDataset encode_dataset(const Dataset& data, const std::vector<std::size_t>& vocab_samples);
/// Every graph encoded with an existing vocabulary.
EncodedDataset encode_dataset(const Dataset& data, model::Vocabulary vocab);

}  // namespace mfgnn::train
