#pragma once

// Reference metric implementations written independently of the library:
// confusion matrices by direct counting and AUC by exhaustive pair
// comparison rather than ranks.

#include <cstddef>
#include <vector>

namespace mfgnn::testing {

struct OracleMetrics {
  double accuracy = 0.0;
  std::vector<double> f1;
  double macro_f1 = 0.0;
};

inline OracleMetrics oracle_metrics(const std::vector<int>& preds, const std::vector<int>& labels, int classes) {
  const auto k = static_cast<std::size_t>(classes);
  std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ++confusion[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(preds[i])];
  }
  OracleMetrics m;
  long correct = 0;
  for (std::size_t c = 0; c < k; ++c) correct += confusion[c][c];
  m.accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    long fp = 0, fn = 0;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += confusion[o][c];
      fn += confusion[c][o];
    }
    const long tp = confusion[c][c];
    // F1 = 2PR/(P+R) simplifies to 2TP/(2TP+FP+FN); zero when TP = 0.
    const double f1 = tp == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(2 * tp + fp + fn);
    m.f1.push_back(f1);
    total += f1;
  }
  m.macro_f1 = total / static_cast<double>(k);
  return m;
}

/// P(score of a random positive > score of a random negative), ties counted 1/2.
inline double oracle_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace mfgnn::testing
