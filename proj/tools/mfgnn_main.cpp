// Command-line driver: graph, train, eval, clone, gradcheck, ablate.
//
// Exit codes: 0 success, 1 failed command (bad input, gradcheck over
// tolerance), 2 missing input file or usage error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfgnn/model/serialize.hpp"
#include "mfgnn/nn/gradcheck_suite.hpp"
#include "mfgnn/tensor/checkpoint.hpp"
#include "mfgnn/train/ablation.hpp"
#include "mfgnn/train/dataset.hpp"
#include "mfgnn/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mfgnn;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMissingInput = 2;

/// Thrown for absent input files; maps to exit code 2.
struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 42;
  int epochs = 200;
  int hidden = 200;
  int embed = 50;
  int layers = 3;
  double lr = tensor::AdamaxConfig{}.lr;
  std::string config_path;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

train::TrainConfig train_config(const RunConfig& rc) {
  train::TrainConfig tc;
  tc.seed = rc.seed;
  tc.epochs = rc.epochs;
  tc.hidden = rc.hidden;
  tc.embed = rc.embed;
  tc.layers = rc.layers;
  tc.adamax.lr = rc.lr;
  if (!rc.config_path.empty()) tc.ablation = nn::AblationConfig::parse(read_text(rc.config_path));
  tc.ablation.validate();
  return tc;
}

json config_echo(const train::TrainConfig& tc) {
  return {{"seed", tc.seed},        {"epochs", tc.epochs}, {"batch_size", tc.batch_size},
          {"embed", tc.embed},      {"hidden", tc.hidden}, {"layers", tc.layers},
          {"lr", tc.adamax.lr},     {"ablation", tc.ablation.name()}};
}

train::Dataset load_data(const std::string& manifest_path) {
  if (!fs::exists(manifest_path)) throw MissingInput("manifest not found: '" + manifest_path + "'");
  return train::load_dataset(train::load_manifest(manifest_path));
}

void print_metrics(const std::string& title, const train::Metrics& m) {
  std::printf("%s: accuracy %.4f  macro-F1 %.4f", title.c_str(), m.accuracy, m.macro_f1);
  if (m.per_class.size() == 2) {
    std::printf("  P %.4f  R %.4f  F1 %.4f", m.per_class[1].precision, m.per_class[1].recall, m.per_class[1].f1);
  }
  if (m.auc) std::printf("  AUC %.4f", *m.auc);
  std::printf("\n");
}

// ---- graph ------------------------------------------------------------------

struct GraphStats {
  int blocks = 0;
  std::array<int, ir::kEdgeKindCount> edges{};
  int branches = 0;
  int operators = 0;
};

void count_labels(const model::TreeNode& n, GraphStats& s) {
  if (n.label == "Branch" || n.label == "Switch") ++s.branches;
  if (n.label == "BOp" || n.label == "UOp") ++s.operators;
  for (const auto& c : n.children) count_labels(c, s);
}

GraphStats graph_stats(const model::CodeGraph& g) {
  GraphStats s;
  s.blocks = static_cast<int>(g.block_count());
  for (const auto& e : g.edges) ++s.edges[static_cast<std::size_t>(e.kind)];
  for (const auto& b : g.blocks) count_labels(b.root, s);
  return s;
}

int cmd_graph(const std::vector<std::string>& inputs, const std::string& out_dir) {
  json summary = json::object();
  auto& files = summary["files"] = json::array();
  double blocks = 0, branches = 0, operators = 0;
  std::array<double, ir::kEdgeKindCount> edge_totals{};
  for (const auto& path : inputs) {
    const model::CodeGraph g = train::load_program(path);
    const GraphStats s = graph_stats(g);
    json row = {{"file", path}, {"blocks", s.blocks}, {"branches", s.branches}, {"operators", s.operators}};
    for (ir::EdgeKind k : ir::kAllEdgeKinds) row["edges"][std::string(ir::to_string(k))] = s.edges[static_cast<std::size_t>(k)];
    files.push_back(row);
    blocks += s.blocks;
    branches += s.branches;
    operators += s.operators;
    for (std::size_t k = 0; k < edge_totals.size(); ++k) edge_totals[k] += s.edges[k];
    if (!out_dir.empty()) {
      write_text(fs::path(out_dir) / (fs::path(path).stem().string() + ".json"), model::serialize(g));
    }
    std::printf("%s: %d blocks, %d branches, %d operators;", path.c_str(), s.blocks, s.branches, s.operators);
    for (ir::EdgeKind k : ir::kAllEdgeKinds) {
      if (const int c = s.edges[static_cast<std::size_t>(k)]; c > 0) {
        std::printf(" %s=%d", std::string(ir::to_string(k)).c_str(), c);
      }
    }
    std::printf("\n");
  }
  const double n = static_cast<double>(inputs.size());
  summary["programs"] = inputs.size();
  if (!inputs.empty()) {
    summary["avg_blocks"] = blocks / n;
    summary["avg_branches"] = branches / n;
    summary["avg_operators"] = operators / n;
    for (ir::EdgeKind k : ir::kAllEdgeKinds) {
      summary["avg_edges"][std::string(ir::to_string(k))] = edge_totals[static_cast<std::size_t>(k)] / n;
    }
    std::printf("programs %zu  avg blocks %.2f  avg branches %.2f  avg operators %.2f\n", inputs.size(),
                blocks / n, branches / n, operators / n);
  } else {
    std::printf("programs 0\n");
  }
  if (!out_dir.empty()) write_text(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
  return 0;
}

// ---- train / clone / eval ---------------------------------------------------

int cmd_train(const std::string& manifest, const RunConfig& rc, const std::string& checkpoint,
              const std::string& metrics_out, std::optional<nn::Task> expected) {
  const train::TrainConfig tc = train_config(rc);
  const train::Dataset data = load_data(manifest);
  if (expected && data.task != *expected) {
    throw train::DataError("manifest '" + manifest + "' holds " + std::string(nn::to_string(data.task)) +
                           " entries, expected " + std::string(nn::to_string(*expected)));
  }
  const auto t0 = std::chrono::steady_clock::now();
  train::RunResult run = train::run_experiment(data, tc);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const train::Metrics train_m = train::evaluate(run.trained.model, data, run.encoded, run.split.train);

  json metrics = run.test.to_json();
  metrics["split"] = "test";
  metrics["train"] = train_m.to_json();
  metrics["task"] = nn::to_string(data.task);
  metrics["best_epoch"] = run.trained.best_epoch;
  metrics["epochs_run"] = run.trained.history.size();
  metrics["sizes"] = {{"train", run.split.train.size()}, {"val", run.split.val.size()}, {"test", run.split.test.size()}};
  metrics["config"] = config_echo(tc);
  metrics["seed"] = tc.seed;
  metrics["seconds"] = seconds;

  write_text(checkpoint, train::make_checkpoint(run.trained.model, run.encoded.vocab, tc, &run));
  if (!metrics_out.empty()) write_text(metrics_out, metrics.dump(2) + "\n");
  std::printf("task %s  config %s  seed %llu  best epoch %d of %zu\n", std::string(nn::to_string(data.task)).c_str(),
              tc.ablation.name().c_str(), static_cast<unsigned long long>(tc.seed), run.trained.best_epoch,
              run.trained.history.size());
  print_metrics("train", train_m);
  print_metrics("test", run.test);
  std::printf("checkpoint written to %s\n", checkpoint.c_str());
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& manifest, const std::string& metrics_out) {
  train::LoadedModel loaded = train::load_model_checkpoint(read_text(checkpoint));
  const train::Dataset data = load_data(manifest);
  if (data.task != loaded.model.task()) throw train::DataError("manifest task does not match the checkpoint");
  const train::Split split = train::split_dataset(data.samples.size(), loaded.seed);
  const train::EncodedDataset enc = train::encode_dataset(data, loaded.vocab);
  const train::Metrics m = train::evaluate(loaded.model, data, enc, split.test);
  json metrics = m.to_json();
  metrics["split"] = "test";
  metrics["task"] = nn::to_string(data.task);
  metrics["config"] = loaded.meta.at("config");
  metrics["seed"] = loaded.seed;
  if (!metrics_out.empty()) write_text(metrics_out, metrics.dump(2) + "\n");
  print_metrics("test", m);
  return 0;
}

// ---- gradcheck / ablate -------------------------------------------------------

int cmd_gradcheck(std::uint64_t seed) {
  const auto rows = nn::run_gradcheck_suite(seed, nn::kGradCheckStep);
  bool ok = true;
  std::printf("%-20s %14s %8s %8s\n", "layer", "max rel error", "checked", "status");
  for (const auto& r : rows) {
    const bool pass = r.result.max_rel_error < nn::kGradCheckTolerance;
    ok = ok && pass;
    std::printf("%-20s %14.3e %8zu %8s\n", r.layer.c_str(), r.result.max_rel_error, r.result.checked,
                pass ? "ok" : "FAIL");
  }
  return ok ? 0 : kExitFailure;
}

int cmd_ablate(const std::string& manifest, const RunConfig& rc, const std::vector<std::string>& names,
               const std::string& out) {
  const train::TrainConfig tc = train_config(rc);
  const train::Dataset data = load_data(manifest);
  std::vector<nn::AblationConfig> configs;
  if (names.empty()) {
    configs = train::default_ablation_matrix();
  } else {
    for (const auto& n : names) configs.push_back(nn::AblationConfig::from_name(n));
  }
  const auto rows = train::run_ablation(configs, data, tc);
  std::printf("%s", train::format_ablation_table(rows).c_str());
  if (!out.empty()) {
    json j = train::ablation_to_json(rows, tc.seed);
    j["config"] = config_echo(tc);
    write_text(out, j.dump(2) + "\n");
  }
  return 0;
}

void add_hyper_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--seed", rc.seed, "random seed")->capture_default_str();
  cmd->add_option("--epochs", rc.epochs, "training epochs")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--hidden", rc.hidden, "hidden width")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--embed", rc.embed, "embedding width")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--layers", rc.layers, "graph layers")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--lr", rc.lr, "Adamax learning rate")->capture_default_str();
  cmd->add_option("--config", rc.config_path, "ablation config file (key=value lines)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Program classification and clone detection over hybrid AST/CFG graphs"};
  app.require_subcommand(1, 1);
  RunConfig rc;

  std::vector<std::string> graph_inputs;
  std::string graph_out;
  auto* graph = app.add_subcommand("graph", "build CodeGraphs and report statistics");
  graph->add_option("inputs", graph_inputs, ".mini source files");
  graph->add_option("-o,--out", graph_out, "directory for CodeGraph JSON files");

  std::string manifest, checkpoint = "model.ckpt.json", metrics_out, ablate_out;
  auto* trn = app.add_subcommand("train", "train a classifier and evaluate on the test split");
  trn->add_option("manifest", manifest, "JSON-lines manifest")->required();
  trn->add_option("--checkpoint", checkpoint, "checkpoint output path")->capture_default_str();
  trn->add_option("--metrics", metrics_out, "metrics JSON output path");
  add_hyper_flags(trn, rc);

  auto* cln = app.add_subcommand("clone", "train the clone detector on a pair manifest");
  cln->add_option("manifest", manifest, "JSON-lines pair manifest")->required();
  cln->add_option("--checkpoint", checkpoint, "checkpoint output path")->capture_default_str();
  cln->add_option("--metrics", metrics_out, "metrics JSON output path");
  add_hyper_flags(cln, rc);

  auto* evl = app.add_subcommand("eval", "evaluate a checkpoint on the test split of a manifest");
  evl->add_option("checkpoint", checkpoint, "checkpoint file")->required();
  evl->add_option("manifest", manifest, "JSON-lines manifest")->required();
  evl->add_option("--metrics", metrics_out, "metrics JSON output path");

  auto* grad = app.add_subcommand("gradcheck", "finite-difference check of every layer type");
  grad->add_option("--seed", rc.seed, "random seed")->capture_default_str();

  std::vector<std::string> ablate_names;
  auto* abl = app.add_subcommand("ablate", "train and compare ablation configurations");
  abl->add_option("manifest", manifest, "JSON-lines manifest")->required();
  abl->add_option("--variants", ablate_names, "configuration names, e.g. A+C+D+M A+C+S");
  abl->add_option("--out", ablate_out, "table JSON output path");
  add_hyper_flags(abl, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitMissingInput;
  }

  try {
    if (*graph) return cmd_graph(graph_inputs, graph_out);
    if (*trn) return cmd_train(manifest, rc, checkpoint, metrics_out, nn::Task::Classify);
    if (*cln) return cmd_train(manifest, rc, checkpoint, metrics_out, nn::Task::Clone);
    if (*evl) return cmd_eval(checkpoint, manifest, metrics_out);
    if (*grad) return cmd_gradcheck(rc.seed);
    if (*abl) return cmd_ablate(manifest, rc, ablate_names, ablate_out);
  } catch (const MissingInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingInput;
  } catch (const train::SourceError& e) {
    std::cerr << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
