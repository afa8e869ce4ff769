// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "seqaug/transport.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace seqaug {

/// Square single-channel grid, row-major. A sequence of length n*n viewed as
/// an n x n array uses the same ordering.
class Grid {
public:
  Grid() = default;
  Grid(std::size_t side, std::vector<double> values);
  static Grid zeros(std::size_t side);
  static Grid from_sequence(const Sequence& seq);

  std::size_t side() const noexcept { return side_; }
  std::size_t cells() const noexcept { return values_.size(); }
  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * side_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * side_ + c]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  Sequence to_sequence() const { return Sequence(values_); }

  double mean() const noexcept;
  double stddev() const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  std::size_t side_ = 0;
  std::vector<double> values_;
};

/// Bilinear resampling with half-pixel centers and edge clamping. Resizing to
/// the same side returns the input unchanged.
Grid resize_bilinear(const Grid& g, std::size_t new_side);

/// All stride-1 patch_side x patch_side windows, flattened row-major, one per
/// row, windows ordered row-major by top-left corner.
RowMatrix extract_patch_matrix(const Grid& g, std::size_t patch_side);
EmpiricalDistribution extract_patches(const Grid& g, std::size_t patch_side);

/// Adjoint of extract_patch_matrix: accumulates each patch row back onto the
/// pixels it was read from.
Grid scatter_patches(const RowMatrix& patches, std::size_t side, std::size_t patch_side);

double l1_distance(const Grid& a, const Grid& b);
double max_abs_difference(const Grid& a, const Grid& b);

/// One grid per line, comma-separated, full round-trip precision.
void write_grids_csv(std::ostream& os, std::span<const Grid> grids);
/// Each non-empty line must hold a perfect-square count of values.
std::vector<Grid> read_grids_csv(std::istream& is);

/// Binary 16-bit PGM, min-max scaled to [0, 65535].
void write_pgm16(const std::filesystem::path& path, const Grid& g);

} // namespace seqaug
