// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "seqaug/experiment.hpp"
#include "seqaug/grid.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace seqaug {

/// One row per (task, ratio, kind, fold, metric); status is "complete" or
/// "partial" on every row.
void write_scores_csv(std::ostream& os, const ScoreReport& report);
ScoreReport read_scores_csv(std::istream& is);

void write_summary_json(std::ostream& os, const ScoreReport& report);

/// Row-normalized fold-averaged confusion matrices of one cell, one block
/// per dataset kind. Rows are ground truth, columns predictions.
void write_confusion_csv(std::ostream& os, std::span<const Aggregate> cell);

/// Grouped bar chart of one metric: cells on the x axis, one bar per
/// dataset kind, whiskers at mean +- std, y axis fixed to [0, 1].
void write_metric_svg(std::ostream& os, std::span<const Aggregate> aggregates, std::size_t metric);

/// Writes scores.csv, summary.json, confusion_<cell>.csv for every cell with
/// confusion data, and <metric>.svg for the four metrics. Returns the paths.
std::vector<std::filesystem::path> emit_report(const ScoreReport& report,
                                               const std::filesystem::path& out_dir);

struct BoundRow {
  double delta_hat = 0.0; ///< mean co-located patch L1 distance
  double lhs = 0.0;       ///< |target - generated|_1
  double factor = 0.0;    ///< |f_L| / min coverage of the patch family
  double rhs = 0.0;       ///< factor * delta_hat
  double slack() const noexcept { return rhs - lhs; }
};

struct BoundsTable {
  std::vector<BoundRow> rows;
  /// Distribution-level check over the matched sets, when computed.
  bool has_set_check = false;
  double set_w1 = 0.0;      ///< exact W1 between the target and generated sets
  double set_bound = 0.0;   ///< factor * mean delta_hat
};

/// Per-pair bound rows, plus the set-level exact W1 when the set size does
/// not exceed `assignment_cap`.
BoundsTable bounds_report(std::span<const Grid> targets, std::span<const Grid> generated,
                          std::size_t patch_side, std::size_t assignment_cap = 256);

void write_bounds_csv(std::ostream& os, const BoundsTable& table);

} // namespace seqaug
