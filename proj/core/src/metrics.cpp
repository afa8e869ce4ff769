// SPDX-License-Identifier: Apache-2.0
#include "seqaug/metrics.hpp"

#include "seqaug/error.hpp"

#include <string>

namespace seqaug {

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts)
    for (std::size_t v : row) n += v;
  return n;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
  return n;
}

std::vector<std::vector<double>> ConfusionMatrix::row_normalized() const {
  std::vector<std::vector<double>> out(counts.size());
  for (std::size_t t = 0; t < counts.size(); ++t) {
    std::size_t sum = 0;
    for (std::size_t v : counts[t]) sum += v;
    out[t].resize(counts[t].size(), 0.0);
    if (sum == 0) continue;
    for (std::size_t p = 0; p < counts[t].size(); ++p)
      out[t][p] = static_cast<double>(counts[t][p]) / static_cast<double>(sum);
  }
  return out;
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted, std::size_t classes) {
  if (truth.size() != predicted.size())
    throw DimensionError("truth and prediction lengths differ");
  ConfusionMatrix cm;
  cm.counts.assign(classes, std::vector<std::size_t>(classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= classes || predicted[i] >= classes)
      throw DataError("class index out of range at position " + std::to_string(i));
    ++cm.counts[truth[i]][predicted[i]];
  }
  return cm;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
  Metrics m;
  m.confusion = cm;
  const std::size_t c = cm.classes();
  const std::size_t n = cm.total();
  m.per_class.resize(c);
  for (std::size_t k = 0; k < c; ++k) {
    auto& s = m.per_class[k];
    s.tp = cm.counts[k][k];
    for (std::size_t j = 0; j < c; ++j) {
      if (j == k) continue;
      s.fn += cm.counts[k][j];
      s.fp += cm.counts[j][k];
    }
    s.support = s.tp + s.fn;
    s.tn = n - s.tp - s.fn - s.fp;
    s.accuracy = ratio(s.tp + s.tn, n);
    s.precision = ratio(s.tp, s.tp + s.fp);
    s.recall = ratio(s.tp, s.tp + s.fn);
    s.f1 = s.precision + s.recall > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
  }
  if (n == 0) return m;
  for (const auto& s : m.per_class) {
    const double w = static_cast<double>(s.support) / static_cast<double>(n);
    m.precision += w * s.precision;
    m.recall += w * s.recall;
    m.f1 += w * s.f1;
    m.ovr_accuracy += w * s.accuracy;
  }
  m.accuracy = ratio(cm.trace(), n);
  return m;
}

Metrics compute_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                        std::size_t classes) {
  return metrics_from_confusion(confusion_matrix(truth, predicted, classes));
}

} // namespace seqaug
