// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "seqaug/grid.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace seqaug {

/// Feature rows with one class index per row; one_hot() gives the label
/// matrix the classifier trains on.
struct LabeledDataset {
  Eigen::MatrixXd features; ///< N x D
  std::vector<std::size_t> labels;
  std::size_t classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
  Eigen::MatrixXd one_hot() const;
  std::vector<std::size_t> supports() const;
  LabeledDataset subset(std::span<const std::size_t> rows) const;
  Grid grid(std::size_t row) const;
  void validate() const;
};

LabeledDataset dataset_from_grids(std::span<const Grid> grids, std::span<const std::size_t> labels,
                                  std::size_t classes);

struct CsvFormat {
  std::size_t feature_count = 2025;
  /// Class tokens in class order; empty means the tokens "0".."C-1".
  std::vector<std::string> class_tokens;
};

/// Rows of feature_count values followed by one class token. A first line
/// whose leading field is not numeric is treated as a header.
LabeledDataset read_dataset_csv(std::istream& is, std::size_t classes, const CsvFormat& fmt = {});
LabeledDataset load_dataset(const std::filesystem::path& path, std::size_t classes,
                            const CsvFormat& fmt = {});
void write_dataset_csv(std::ostream& os, const LabeledDataset& data);

/// ceil(ratio * support_c) per class.
std::vector<std::size_t> ratio_counts(std::span<const std::size_t> supports, double ratio);

/// Largest-remainder allocation of `total` in proportion to the supports.
std::vector<std::size_t> proportional_counts(std::span<const std::size_t> supports,
                                             std::size_t total);

/// Row indices drawn without replacement, counts[c] from class c. Output is
/// grouped by class in class order, ascending within a class.
std::vector<std::size_t> label_weighted_indices(const LabeledDataset& data,
                                                std::span<const std::size_t> counts,
                                                std::uint64_t seed);

LabeledDataset label_weighted_sample(const LabeledDataset& data, double ratio, std::uint64_t seed);
LabeledDataset label_weighted_sample(const LabeledDataset& data,
                                     std::span<const std::size_t> counts, std::uint64_t seed);

struct FoldAssignment {
  std::vector<std::size_t> fold_of_row;
  std::size_t folds = 0;
  std::vector<std::string> warnings;

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Stratified random partition. Members of each class are shuffled and laid
/// out class after class; position mod folds gives the fold, so fold sizes
/// differ by at most one. Classes smaller than `folds` are pooled and
/// shuffled together at the end, with a warning.
FoldAssignment make_split(const LabeledDataset& data, std::size_t folds, std::uint64_t seed);

/// Per-feature z-score parameters.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& features);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& features) const;
};

struct TextureTaskConfig {
  std::size_t classes = 4;
  std::size_t per_class = 100;
  std::size_t side = 16;
  double noise = 0.6;
  std::uint64_t seed = 7;
};

/// Built-in toy task: each class is a family of horizontal band patterns with
/// class-specific band rows and stripe frequency, randomly jittered, plus
/// Gaussian noise.
LabeledDataset make_texture_dataset(const TextureTaskConfig& cfg);

} // namespace seqaug
