// SPDX-License-Identifier: Apache-2.0
#include "seqaug/error.hpp"
#include "seqaug/metrics.hpp"

#include <gtest/gtest.h>

#include <random>

namespace seqaug {
namespace {

// Expands a confusion matrix (rows truth) into label vectors.
void expand(const std::vector<std::vector<std::size_t>>& counts, std::vector<std::size_t>& truth,
            std::vector<std::size_t>& pred) {
  for (std::size_t t = 0; t < counts.size(); ++t)
    for (std::size_t p = 0; p < counts[t].size(); ++p)
      for (std::size_t k = 0; k < counts[t][p]; ++k) {
        truth.push_back(t);
        pred.push_back(p);
      }
}

TEST(Metrics, BinaryHandExample) {
  std::vector<std::size_t> truth, pred;
  expand({{50, 10}, {5, 35}}, truth, pred);
  const auto m = compute_metrics(truth, pred, 2);
  EXPECT_EQ(m.confusion.counts, (std::vector<std::vector<std::size_t>>{{50, 10}, {5, 35}}));
  EXPECT_NEAR(m.accuracy, 0.85, 1e-12);
  EXPECT_NEAR(m.recall, 0.85, 1e-12);
  EXPECT_NEAR(m.ovr_accuracy, 0.85, 1e-12);
  // Precision: class 0 50/55, class 1 35/45, weights 60 and 40.
  EXPECT_NEAR(m.precision, (50.0 / 55.0 * 60 + 35.0 / 45.0 * 40) / 100.0, 1e-12);
  const double f0 = 2 * (50.0 / 55) * (50.0 / 60) / (50.0 / 55 + 50.0 / 60);
  const double f1 = 2 * (35.0 / 45) * (35.0 / 40) / (35.0 / 45 + 35.0 / 40);
  EXPECT_NEAR(m.f1, (f0 * 60 + f1 * 40) / 100.0, 1e-12);
  EXPECT_EQ(m.per_class[0].tp, 50u);
  EXPECT_EQ(m.per_class[0].fn, 10u);
  EXPECT_EQ(m.per_class[0].fp, 5u);
  EXPECT_EQ(m.per_class[0].tn, 35u);
  EXPECT_EQ(m.per_class[1].support, 40u);
}

TEST(Metrics, Perfect) {
  const std::vector<std::size_t> y{0, 1, 2, 2, 1, 0, 3};
  const auto m = compute_metrics(y, y, 4);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t p = 0; p < 4; ++p) EXPECT_EQ(m.confusion.counts[t][p] > 0, t == p);
}

TEST(Metrics, NoPredictedPositivesGivesZero) {
  const std::vector<std::size_t> truth{0, 0, 1, 1}, pred{0, 0, 0, 0};
  const auto m = compute_metrics(truth, pred, 2);
  EXPECT_EQ(m.per_class[1].precision, 0.0);
  EXPECT_EQ(m.per_class[1].recall, 0.0);
  EXPECT_EQ(m.per_class[1].f1, 0.0);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
}

TEST(Metrics, Errors) {
  const std::vector<std::size_t> a{0, 1}, b{0}, c{0, 2};
  EXPECT_THROW(compute_metrics(a, b, 2), DimensionError);
  EXPECT_THROW(compute_metrics(a, c, 2), DataError);
}

TEST(Confusion, RowNormalized) {
  ConfusionMatrix cm{{{3, 1, 0}, {0, 0, 0}, {2, 2, 4}}};
  const auto n = cm.row_normalized();
  EXPECT_DOUBLE_EQ(n[0][0], 0.75);
  EXPECT_EQ(n[1], (std::vector<double>{0, 0, 0}));
  EXPECT_DOUBLE_EQ(n[2][0] + n[2][1] + n[2][2], 1.0);
  EXPECT_EQ(cm.total(), 12u);
  EXPECT_EQ(cm.trace(), 7u);
}

TEST(MetricsProperty, IdentitiesOnRandomLabels) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t classes = 2 + static_cast<std::size_t>(trial % 9);
    const std::size_t n = 1 + static_cast<std::size_t>(trial * 7 % 60);
    std::uniform_int_distribution<std::size_t> cls(0, classes - 1);
    std::vector<std::size_t> truth(n), pred(n);
    for (auto& v : truth) v = cls(rng);
    for (std::size_t i = 0; i < n; ++i) pred[i] = std::bernoulli_distribution(0.6)(rng) ? truth[i] : cls(rng);
    const auto m = compute_metrics(truth, pred, classes);
    const double correct = static_cast<double>(m.confusion.trace());
    EXPECT_NEAR(m.accuracy, correct / static_cast<double>(n), 1e-12);
    EXPECT_NEAR(m.recall, m.accuracy, 1e-12);
    std::size_t tp = 0, fp = 0, fn = 0, support = 0;
    for (const auto& c : m.per_class) {
      tp += c.tp;
      fp += c.fp;
      fn += c.fn;
      support += c.support;
      EXPECT_EQ(c.tp + c.tn + c.fp + c.fn, n);
    }
    EXPECT_EQ(tp, m.confusion.trace());
    EXPECT_EQ(fp, n - tp);
    EXPECT_EQ(fn, n - tp);
    EXPECT_EQ(support, n);
    for (double v : {m.accuracy, m.precision, m.recall, m.f1, m.ovr_accuracy}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

} // namespace
} // namespace seqaug
