// SPDX-License-Identifier: Apache-2.0
//
// Wasserstein-1 distances with L1 ground cost between equally weighted
// empirical distributions, their sliced Monte-Carlo surrogate, and the
// deterministic inequalities that relate subsequence-level and
// sequence-level transport.
#pragma once

#include "seqaug/algebra.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace seqaug {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// m >= 1 finite points of common dimension k, each weighted 1/m.
class EmpiricalDistribution {
public:
  explicit EmpiricalDistribution(RowMatrix points);
  static EmpiricalDistribution from_rows(const std::vector<std::vector<double>>& rows);

  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dim() const noexcept { return points_.cols(); }
  const RowMatrix& points() const noexcept { return points_; }

private:
  RowMatrix points_;
};

/// p unit directions in R^k, one per row.
class ProjectionSet {
public:
  ProjectionSet(RowMatrix directions, std::uint64_t seed);

  /// Normalized Gaussian draws; direction j depends only on (seed, j).
  static ProjectionSet sample(Eigen::Index dim, Eigen::Index count, std::uint64_t seed);

  Eigen::Index count() const noexcept { return directions_.rows(); }
  Eigen::Index dim() const noexcept { return directions_.cols(); }
  const RowMatrix& directions() const noexcept { return directions_; }
  std::uint64_t seed() const noexcept { return seed_; }

private:
  RowMatrix directions_;
  std::uint64_t seed_;
};

inline constexpr Eigen::Index kDefaultAssignmentCap = 2048;

struct Assignment {
  std::vector<Eigen::Index> column_of_row;
  double total_cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix (shortest
/// augmenting path with potentials, O(m^3)).
Assignment solve_assignment(const RowMatrix& cost);

/// Exact W1 between equal-size empirical distributions: the optimal
/// assignment cost under the L1 ground norm divided by m.
double exact_w1(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                Eigen::Index cap = kDefaultAssignmentCap);

/// Sorted matching: (1/m) sum |sort(a)_i - sort(b)_i|.
double exact_w1_1d(std::span<const double> a, std::span<const double> b);

double sliced_w(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                const ProjectionSet& proj);

struct SlicedResult {
  double loss = 0.0;
  RowMatrix gradient; ///< m x k, d loss / d a_i
};

/// Loss and its sorted-matching subgradient with respect to the points of a.
/// Points tied in projection keep their stable-sort order.
SlicedResult sliced_w_with_gradient(const RowMatrix& a, const RowMatrix& b,
                                    const ProjectionSet& proj);

RowMatrix sliced_w_gradient(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                            const ProjectionSet& proj);

/// exact_w1(a, a); zero for any a because the diagonal coupling is admissible.
double lemma2_selfcoupling_check(const EmpiricalDistribution& a);

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const noexcept { return rhs - lhs; }
};

/// Triangle-inequality step relating projections of x' and g to permuted
/// subsequences of x. sigma and sigma_prime permute the family's selectors
/// (sigma[k] is the index of the selector used in place of selector k).
///   lhs = mean_L |L^T L x' - L^T L g|
///   rhs = mean_L |sigma(L) x - sigma'(L) g| + mean_L |sigma(L) x - sigma'(L) x'|
InequalitySides lemma1_check(const Sequence& x, const Sequence& x_prime, const Sequence& g,
                             const SelectorFamily& fam, std::span<const std::size_t> sigma,
                             std::span<const std::size_t> sigma_prime);

/// lhs = |x' - g|_1, rhs = bound_factor(fam) * mean_L |L^T L x' - L^T L g|_1.
InequalitySides theorem1_deterministic_check(const Sequence& x_prime, const Sequence& g,
                                             const SelectorFamily& fam);

/// mean_L |L a - L b|_1 over the family, i.e. the matched-position estimate.
double mean_subsequence_distance(const Sequence& a, const Sequence& b, const SelectorFamily& fam);

} // namespace seqaug
