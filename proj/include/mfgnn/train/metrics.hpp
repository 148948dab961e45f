#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace mfgnn::train {

class MetricError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const ClassScores&, const ClassScores&) = default;
};

struct Metrics {
  double accuracy = 0.0;
  std::vector<ClassScores> per_class;
  double macro_f1 = 0.0;
  /// Binary tasks with both classes present only.
  std::optional<double> auc;

  friend bool operator==(const Metrics&, const Metrics&) = default;
  nlohmann::json to_json() const;
};

/// Fraction of positions where preds == labels. Throws MetricError on empty
/// or mismatched input.
double accuracy(const std::vector<int>& preds, const std::vector<int>& labels);

/// Precision TP/(TP+FP), recall TP/(TP+FN) and their harmonic mean per
/// class 0..K-1; each is 0 when its denominator is 0.
std::vector<ClassScores> per_class_scores(const std::vector<int>& preds, const std::vector<int>& labels,
                                          int classes);

/// Unweighted mean of per-class F1 over K ≥ 2 classes.
double macro_f1(const std::vector<int>& preds, const std::vector<int>& labels, int classes);

/// (#concordant + 0.5 #tied) / (#pos #neg) over positive/negative pairs.
/// Throws MetricError when either class is empty.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

/// All fields; `positive_scores` (score of class 1) enables AUC when K = 2.
Metrics compute_metrics(const std::vector<int>& preds, const std::vector<int>& labels, int classes,
                        const std::vector<double>& positive_scores = {});

}  // namespace mfgnn::train
