// SPDX-License-Identifier: Apache-2.0
//
// Evaluation harness: per fold, a classifier is trained on the original
// training split, on a label-weighted reduced subset, and on a synthetic set
// generated one-shot from the reduced subset; all three are scored on the
// held-out fold.
#pragma once

#include "seqaug/dataset.hpp"
#include "seqaug/generator.hpp"
#include "seqaug/metrics.hpp"
#include "seqaug/mlp.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seqaug {

enum class DatasetKind { original, reduced, synthetic };

std::string to_string(DatasetKind kind);
DatasetKind parse_dataset_kind(const std::string& name);

struct ExperimentConfig {
  std::size_t task = 4; ///< number of classes
  std::vector<double> reduction_ratios{0.05, 0.10, 0.15, 0.20};
  /// Optional exact per-class reduced sizes keyed by ratio index; overrides
  /// the ceil(ratio * support) rule for that ratio.
  std::map<std::size_t, std::vector<std::size_t>> explicit_counts;
  std::size_t folds = 5;
  /// Synthetic set size; 0 means "same as the fold's original training split".
  std::size_t target_train_size = 908;
  /// Label-proportional downsampling applied before splitting when the
  /// loaded data is larger; 0 disables it.
  std::size_t downsample_size = 1135;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  GeneratorConfig generator;
  MlpConfig classifier;

  void validate() const;
};

/// Cell label, e.g. C04P05.
std::string cell_name(std::size_t task, double ratio);

struct Scores {
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
  static Scores from(const Metrics& m) { return {m.accuracy, m.precision, m.recall, m.f1}; }
};

inline constexpr const char* kMetricNames[4] = {"accuracy", "precision", "recall", "f1"};
double metric_value(const Scores& s, std::size_t metric);

struct ScoreEntry {
  std::size_t task = 0;
  double ratio = 0.0;
  DatasetKind kind = DatasetKind::original;
  std::size_t fold = 0;
  Scores scores;
  std::optional<ConfusionMatrix> confusion;
};

enum class FailureKind { none, data, divergence, other };

struct ScoreReport {
  std::vector<ScoreEntry> entries;
  std::size_t folds = 0;
  bool partial = false;
  FailureKind failure = FailureKind::none;
  std::string error;
};

struct Aggregate {
  std::size_t task = 0;
  double ratio = 0.0;
  DatasetKind kind = DatasetKind::original;
  std::size_t count = 0;
  Scores mean;
  Scores stddev; ///< population standard deviation over folds
  /// Fold average of row-normalized confusion matrices, when available.
  std::vector<std::vector<double>> confusion;
};

/// Aggregates in (task, ratio, kind) order of first appearance.
std::vector<Aggregate> aggregate(const ScoreReport& report);

/// floor(target / n) per sample, with the remainder given to the first
/// (target mod n) samples of a seeded permutation.
std::vector<std::size_t> synthetic_allocation(std::size_t reduced_size, std::size_t target,
                                              std::uint64_t seed);

/// Trains on `train` (standardized with statistics fit on `train`) and
/// scores on `test`.
Metrics train_and_score(const LabeledDataset& train, const LabeledDataset& test,
                        const MlpConfig& cfg);

/// Generates a synthetic training set of exactly `target` rows from `reduced`.
LabeledDataset synthesize(const LabeledDataset& reduced, std::size_t target,
                          const GeneratorConfig& cfg, std::uint64_t seed, unsigned jobs);

/// Runs every (ratio, fold) cell. Never throws for errors inside cells: the
/// report is returned with `partial` set and the failure recorded, so that
/// completed cells can still be written out.
ScoreReport run_experiment(const LabeledDataset& data, const ExperimentConfig& cfg);

} // namespace seqaug

namespace seqaug {

/// Desk-scale configuration for the built-in texture task: 16x16 grids,
/// 5% reduction, two folds, synthetic set as large as the training split.
struct SmokeSetup {
  TextureTaskConfig task;
  ExperimentConfig experiment;
};

SmokeSetup smoke_setup();

} // namespace seqaug
