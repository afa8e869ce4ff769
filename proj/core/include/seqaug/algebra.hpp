// SPDX-License-Identifier: Apache-2.0
//
// Sequences, subsequence selectors and selector families.
//
// A selector of length d' over sequences of length d is stored as its
// strictly increasing index list; this is the sparse form of a d' x d binary
// matrix L with L^T L <= I. A family of selectors reconstructs any sequence
// from its projections as long as every index is covered at least once.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace seqaug {

/// Finite real vector of length d >= 1.
class Sequence {
public:
  explicit Sequence(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Sequence&, const Sequence&) = default;

private:
  std::vector<double> values_;
};

class Selector {
public:
  /// Throws DimensionError unless indices are strictly increasing, non-empty
  /// and inside [0, d).
  Selector(std::size_t d, std::vector<std::size_t> indices);

  static Selector identity(std::size_t d);

  std::size_t domain() const noexcept { return d_; }
  std::size_t length() const noexcept { return indices_.size(); }
  std::span<const std::size_t> indices() const noexcept { return indices_; }

  friend bool operator==(const Selector&, const Selector&) = default;
  friend auto operator<=>(const Selector&, const Selector&) = default;

private:
  std::size_t d_;
  std::vector<std::size_t> indices_;
};

/// Non-empty set of distinct selectors sharing d and d'. Coverage is not
/// enforced here; see validate_family().
class SelectorFamily {
public:
  explicit SelectorFamily(std::vector<Selector> selectors);

  std::size_t domain() const noexcept { return d_; }
  std::size_t selector_length() const noexcept { return d_prime_; }
  std::size_t size() const noexcept { return selectors_.size(); }
  std::span<const Selector> selectors() const noexcept { return selectors_; }

private:
  std::vector<Selector> selectors_;
  std::size_t d_ = 0;
  std::size_t d_prime_ = 0;
};

/// n x n grid with n' x n' windows.
struct GridShape {
  std::size_t side;
  std::size_t patch_side;

  GridShape(std::size_t n, std::size_t n_prime);
  std::size_t cells() const noexcept { return side * side; }
  std::size_t windows_per_axis() const noexcept { return side - patch_side + 1; }
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

Sequence apply_selector(const Selector& sel, const Sequence& x);
Sequence project(const Selector& sel, const Sequence& x);

/// Per-index count of selectors containing that index.
std::vector<std::size_t> coverage(const SelectorFamily& fam);

bool validate_family(const SelectorFamily& fam) noexcept;

/// Sum of projections divided elementwise by coverage. Throws CoverageError
/// for an invalid family and DimensionError for misaligned projections.
Sequence reconstruct(const SelectorFamily& fam, std::span<const Sequence> projections);

/// Projections of x under every selector of fam, in family order.
std::vector<Sequence> projections_of(const SelectorFamily& fam, const Sequence& x);

/// All C(d, d') subsequences, in lexicographic order.
SelectorFamily enumerate_all_subsequences(std::size_t d, std::size_t d_prime,
                                          std::uint64_t cap = kDefaultEnumerationCap);

/// Contiguous substrings of length d' (the 1D sliding window family).
SelectorFamily enumerate_substrings(std::size_t d, std::size_t d_prime);

/// Row-major index sets of every contiguous n' x n' window, windows ordered
/// row-major by their top-left corner.
SelectorFamily enumerate_2d_patches(const GridShape& shape);

/// |f_L| / min_i coverage_i. Throws CoverageError for an invalid family.
double bound_factor(const SelectorFamily& fam);

struct CorollaryFactors {
  double all_subsequences; ///< d / d'
  double grid_patches;     ///< (n - n' + 1)^2
};

CorollaryFactors corollary_factors(std::size_t d, std::size_t d_prime, std::size_t n,
                                   std::size_t n_prime);

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// One selector per line, indices separated by single spaces. The first line
/// is a header "d <d> d' <d'>".
void write_family(std::ostream& os, const SelectorFamily& fam);
SelectorFamily read_family(std::istream& is);

} // namespace seqaug
