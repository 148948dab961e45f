#include "mfgnn/train/ablation.hpp"

#include <cstdio>
#include <sstream>

namespace mfgnn::train {

std::vector<AblationRow> run_ablation(const std::vector<nn::AblationConfig>& configs, const Dataset& data,
                                      const TrainConfig& base) {
  std::vector<AblationRow> rows;
  for (const auto& config : configs) {
    config.validate();
    TrainConfig tc = base;
    tc.ablation = config;
    RunResult run = run_experiment(data, tc);
    rows.push_back({config, std::move(run.test), run.trained.best_epoch});
  }
  return rows;
}

std::vector<nn::AblationConfig> default_ablation_matrix() {
  std::vector<nn::AblationConfig> out;
  for (const char* name : {"A+C+D+M", "A+C+S", "A+D+S", "A+C+M", "A+C+D+S", "B+C+D+M"}) {
    out.push_back(nn::AblationConfig::from_name(name));
  }
  nn::AblationConfig concat;
  concat.combine = nn::Combine::Concat;
  out.push_back(concat);
  nn::AblationConfig gcn;
  gcn.aggregator = nn::Aggregator::Gcn;
  out.push_back(gcn);
  return out;
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %10s %10s %10s %10s\n", "Config", "Accuracy", "Macro-F1", "AUC",
                "BestEpoch");
  os << line;
  for (const auto& r : rows) {
    char auc[32];
    if (r.test.auc) {
      std::snprintf(auc, sizeof auc, "%10.4f", *r.test.auc);
    } else {
      std::snprintf(auc, sizeof auc, "%10s", "-");
    }
    std::snprintf(line, sizeof line, "%-20s %10.4f %10.4f %s %10d\n", r.config.name().c_str(), r.test.accuracy,
                  r.test.macro_f1, auc, r.best_epoch);
    os << line;
  }
  return os.str();
}

nlohmann::json ablation_to_json(const std::vector<AblationRow>& rows, std::uint64_t seed) {
  nlohmann::json j;
  j["seed"] = seed;
  auto& arr = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = r.test.to_json();
    row["config"] = r.config.name();
    row["best_epoch"] = r.best_epoch;
    arr.push_back(std::move(row));
  }
  return j;
}

}  // namespace mfgnn::train
