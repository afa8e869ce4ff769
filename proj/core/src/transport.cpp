// SPDX-License-Identifier: Apache-2.0
#include "seqaug/transport.hpp"

#include "seqaug/error.hpp"
#include "seqaug/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace seqaug {

EmpiricalDistribution::EmpiricalDistribution(RowMatrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1)
    throw DimensionError("empirical distribution needs at least one point of dimension >= 1");
  if (!points_.allFinite()) throw DataError("empirical distribution has non-finite coordinates");
}

EmpiricalDistribution EmpiricalDistribution::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DimensionError("empirical distribution needs at least one point");
  const auto k = static_cast<Eigen::Index>(rows.front().size());
  RowMatrix pts(static_cast<Eigen::Index>(rows.size()), k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != k)
      throw DimensionError("points of an empirical distribution must share a dimension");
    for (Eigen::Index c = 0; c < k; ++c) pts(static_cast<Eigen::Index>(i), c) = rows[i][c];
  }
  return EmpiricalDistribution(std::move(pts));
}

ProjectionSet::ProjectionSet(RowMatrix directions, std::uint64_t seed)
    : directions_(std::move(directions)), seed_(seed) {
  if (directions_.rows() < 1 || directions_.cols() < 1)
    throw DimensionError("projection set needs at least one direction");
  for (Eigen::Index j = 0; j < directions_.rows(); ++j)
    if (std::abs(directions_.row(j).norm() - 1.0) > 1e-9)
      throw DimensionError("projection direction " + std::to_string(j) + " is not unit length");
}

ProjectionSet ProjectionSet::sample(Eigen::Index dim, Eigen::Index count, std::uint64_t seed) {
  if (dim < 1 || count < 1) throw DimensionError("projection set needs dim >= 1 and count >= 1");
  RowMatrix dirs(count, dim);
  for (Eigen::Index j = 0; j < count; ++j) {
    const CounterRng rng(derive_key(seed, static_cast<std::uint64_t>(j)));
    double norm = 0.0;
    std::uint64_t counter = 0;
    // A zero draw has probability zero; redraw for completeness.
    while (norm == 0.0) {
      for (Eigen::Index c = 0; c < dim; ++c) dirs(j, c) = rng.normal(counter++);
      norm = dirs.row(j).norm();
    }
    dirs.row(j) /= norm;
  }
  return ProjectionSet(std::move(dirs), seed);
}

Assignment solve_assignment(const RowMatrix& cost) {
  const Eigen::Index n = cost.rows();
  if (n != cost.cols()) throw DimensionError("assignment cost matrix must be square");
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual root of each augmenting search.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<Eigen::Index> row_of_col(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);
  for (Eigen::Index i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    Eigen::Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = row_of_col[j0];
      double delta = inf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment out;
  out.column_of_row.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index j = 1; j <= n; ++j) out.column_of_row[row_of_col[j] - 1] = j - 1;
  // Re-sum from the matching rather than trusting the potentials.
  for (Eigen::Index i = 0; i < n; ++i) out.total_cost += cost(i, out.column_of_row[i]);
  return out;
}

namespace {

void require_same_shape(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.size() != b.size())
    throw UnsupportedMarginals("transport requires equal-size empirical distributions (" +
                               std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.dim() != b.dim()) throw DimensionError("empirical distributions differ in dimension");
}

std::vector<Eigen::Index> stable_argsort(const double* values, Eigen::Index m) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [values](Eigen::Index l, Eigen::Index r) { return values[l] < values[r]; });
  return order;
}

double sign(double x) noexcept { return (x > 0.0) - (x < 0.0); }

} // namespace

double exact_w1(const EmpiricalDistribution& a, const EmpiricalDistribution& b, Eigen::Index cap) {
  require_same_shape(a, b);
  const Eigen::Index m = a.size();
  if (m > cap)
    throw EnumerationTooLarge("exact W1 with m = " + std::to_string(m) +
                              " exceeds the assignment cap " + std::to_string(cap));
  RowMatrix cost(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      cost(i, j) = (a.points().row(i) - b.points().row(j)).cwiseAbs().sum();
  return solve_assignment(cost).total_cost / static_cast<double>(m);
}

double exact_w1_1d(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw DimensionError("1D transport requires equal lengths");
  if (a.empty()) throw DimensionError("1D transport requires at least one point");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) total += std::abs(sa[i] - sb[i]);
  return total / static_cast<double>(sa.size());
}

SlicedResult sliced_w_with_gradient(const RowMatrix& a, const RowMatrix& b,
                                    const ProjectionSet& proj) {
  if (a.rows() != b.rows())
    throw UnsupportedMarginals("sliced W requires equal-size empirical distributions");
  if (a.cols() != b.cols() || a.cols() != proj.dim())
    throw DimensionError("sliced W dimension mismatch");
  const Eigen::Index m = a.rows();
  const Eigen::Index p = proj.count();
  // Column-major so each direction's projections are contiguous.
  const Eigen::MatrixXd pa = a * proj.directions().transpose();
  Eigen::MatrixXd pb = b * proj.directions().transpose();
  Eigen::MatrixXd signs(m, p);
  double loss = 0.0;
  for (Eigen::Index t = 0; t < p; ++t) {
    const double* col_a = pa.col(t).data();
    double* col_b = pb.col(t).data();
    std::sort(col_b, col_b + m);
    const auto order = stable_argsort(col_a, m);
    double slice = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      const double diff = col_a[order[r]] - col_b[r];
      slice += std::abs(diff);
      signs(order[r], t) = sign(diff);
    }
    loss += slice / static_cast<double>(m);
  }
  SlicedResult out;
  out.loss = loss / static_cast<double>(p);
  out.gradient = (signs * proj.directions()) / static_cast<double>(m * p);
  return out;
}

double sliced_w(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                const ProjectionSet& proj) {
  require_same_shape(a, b);
  return sliced_w_with_gradient(a.points(), b.points(), proj).loss;
}

RowMatrix sliced_w_gradient(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                            const ProjectionSet& proj) {
  require_same_shape(a, b);
  return sliced_w_with_gradient(a.points(), b.points(), proj).gradient;
}

double lemma2_selfcoupling_check(const EmpiricalDistribution& a) { return exact_w1(a, a); }

namespace {

double l1(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double selected_l1(const Selector& sa, const Sequence& a, const Selector& sb, const Sequence& b) {
  double s = 0.0;
  const auto ia = sa.indices();
  const auto ib = sb.indices();
  for (std::size_t k = 0; k < ia.size(); ++k) s += std::abs(a[ia[k]] - b[ib[k]]);
  return s;
}

void check_lengths(const Sequence& a, const Sequence& b, const SelectorFamily& fam) {
  if (a.size() != b.size() || a.size() != fam.domain())
    throw DimensionError("sequences and family must share length d");
}

void check_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) throw DimensionError("permutation length differs from family size");
  std::vector<char> seen(n, 0);
  for (std::size_t v : perm) {
    if (v >= n || seen[v]) throw DimensionError("not a permutation of the family");
    seen[v] = 1;
  }
}

} // namespace

double mean_subsequence_distance(const Sequence& a, const Sequence& b, const SelectorFamily& fam) {
  check_lengths(a, b, fam);
  double total = 0.0;
  for (const auto& s : fam.selectors()) total += selected_l1(s, a, s, b);
  return total / static_cast<double>(fam.size());
}

InequalitySides lemma1_check(const Sequence& x, const Sequence& x_prime, const Sequence& g,
                             const SelectorFamily& fam, std::span<const std::size_t> sigma,
                             std::span<const std::size_t> sigma_prime) {
  check_lengths(x, x_prime, fam);
  check_lengths(x, g, fam);
  check_permutation(sigma, fam.size());
  check_permutation(sigma_prime, fam.size());
  const auto sel = fam.selectors();
  const double n = static_cast<double>(fam.size());
  InequalitySides out;
  double gen = 0.0, real = 0.0;
  for (std::size_t k = 0; k < sel.size(); ++k) {
    // Projections differ only on the selected indices.
    out.lhs += selected_l1(sel[k], x_prime, sel[k], g);
    gen += selected_l1(sel[sigma[k]], x, sel[sigma_prime[k]], g);
    real += selected_l1(sel[sigma[k]], x, sel[sigma_prime[k]], x_prime);
  }
  out.lhs /= n;
  out.rhs = gen / n + real / n;
  return out;
}

InequalitySides theorem1_deterministic_check(const Sequence& x_prime, const Sequence& g,
                                             const SelectorFamily& fam) {
  check_lengths(x_prime, g, fam);
  InequalitySides out;
  out.lhs = l1(x_prime.values(), g.values());
  out.rhs = bound_factor(fam) * mean_subsequence_distance(x_prime, g, fam);
  return out;
}

} // namespace seqaug
