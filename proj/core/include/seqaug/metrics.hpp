// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seqaug {

/// counts[t][p]: samples of ground-truth class t predicted as class p.
struct ConfusionMatrix {
  std::vector<std::vector<std::size_t>> counts;

  std::size_t classes() const noexcept { return counts.size(); }
  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  /// Each row divided by its sum; rows with no support stay all-zero.
  std::vector<std::vector<double>> row_normalized() const;
};

struct ClassScores {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  std::size_t support = 0;
  double accuracy = 0.0; ///< one-vs-rest (TP+TN)/N
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Metrics {
  /// Support-weighted per-label accuracy in the confusion-diagonal sense,
  /// which equals trace / N.
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Support-weighted one-vs-rest (TP+TN)/N. Equals `accuracy` for two classes.
  double ovr_accuracy = 0.0;
  std::vector<ClassScores> per_class;
  ConfusionMatrix confusion;
};

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted, std::size_t classes);

Metrics metrics_from_confusion(const ConfusionMatrix& cm);

/// Throws DimensionError on length mismatch and DataError for a class index
/// outside [0, classes).
Metrics compute_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                        std::size_t classes);

} // namespace seqaug
