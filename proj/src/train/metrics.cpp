#include "mfgnn/train/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mfgnn::train {

namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) {
    throw MetricError("prediction/label count mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
  if (a == 0) throw MetricError("metrics of an empty sample");
}

}  // namespace

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
  check_sizes(preds.size(), labels.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

std::vector<ClassScores> per_class_scores(const std::vector<int>& preds, const std::vector<int>& labels,
                                          int classes) {
  check_sizes(preds.size(), labels.size());
  if (classes < 1) throw MetricError("class count must be positive");
  std::vector<long> tp(static_cast<std::size_t>(classes)), fp(tp.size()), fn(tp.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = preds[i];
    const int y = labels[i];
    if (p < 0 || p >= classes || y < 0 || y >= classes) throw MetricError("class id out of range");
    if (p == y) {
      ++tp[static_cast<std::size_t>(p)];
    } else {
      ++fp[static_cast<std::size_t>(p)];
      ++fn[static_cast<std::size_t>(y)];
    }
  }
  std::vector<ClassScores> out(tp.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = static_cast<double>(tp[k]);
    auto& s = out[k];
    s.precision = tp[k] + fp[k] > 0 ? t / static_cast<double>(tp[k] + fp[k]) : 0.0;
    s.recall = tp[k] + fn[k] > 0 ? t / static_cast<double>(tp[k] + fn[k]) : 0.0;
    // 2PR/(P+R) in one correctly rounded division.
    s.f1 = tp[k] > 0 ? 2.0 * t / static_cast<double>(2 * tp[k] + fp[k] + fn[k]) : 0.0;
  }
  return out;
}

double macro_f1(const std::vector<int>& preds, const std::vector<int>& labels, int classes) {
  const auto scores = per_class_scores(preds, labels, classes);
  double total = 0.0;
  for (const auto& s : scores) total += s.f1;
  return total / static_cast<double>(scores.size());
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_sizes(scores.size(), labels.size());
  // Rank-sum form of Mann-Whitney U with midranks for ties.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  long pos = 0;
  long neg = 0;
  for (int y : labels) {
    if (y == 1) {
      ++pos;
    } else if (y == 0) {
      ++neg;
    } else {
      throw MetricError("AUC needs 0/1 labels");
    }
  }
  if (pos == 0 || neg == 0) throw MetricError("AUC undefined: one class has no samples");
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // ranks i+1 .. j share the midrank
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double u = pos_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

Metrics compute_metrics(const std::vector<int>& preds, const std::vector<int>& labels, int classes,
                        const std::vector<double>& positive_scores) {
  Metrics m;
  m.accuracy = accuracy(preds, labels);
  m.per_class = per_class_scores(preds, labels, classes);
  for (const auto& s : m.per_class) m.macro_f1 += s.f1;
  m.macro_f1 /= static_cast<double>(m.per_class.size());
  if (classes == 2 && !positive_scores.empty()) {
    try {
      m.auc = auc(positive_scores, labels);
    } catch (const MetricError&) {
      m.auc.reset();
    }
  }
  return m;
}

nlohmann::json Metrics::to_json() const {
  nlohmann::json j;
  j["accuracy"] = accuracy;
  j["macro_f1"] = macro_f1;
  j["auc"] = auc ? nlohmann::json(*auc) : nlohmann::json(nullptr);
  auto& pc = j["per_class"] = nlohmann::json::array();
  for (const auto& s : per_class) {
    pc.push_back({{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}});
  }
  if (per_class.size() == 2) {
    j["precision"] = per_class[1].precision;
    j["recall"] = per_class[1].recall;
    j["f1"] = per_class[1].f1;
  }
  return j;
}

}  // namespace mfgnn::train
