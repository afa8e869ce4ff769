// SPDX-License-Identifier: Apache-2.0
#include "seqaug/algebra.hpp"
#include "seqaug/error.hpp"
#include "seqaug/transport.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace seqaug {
namespace {

Sequence seq(std::vector<double> v) { return Sequence(std::move(v)); }

std::vector<double> values(const Sequence& s) { return {s.values().begin(), s.values().end()}; }

TEST(Selector, RejectsUnsortedOrOutOfRange) {
  EXPECT_THROW(Selector(4, {1, 1}), DimensionError);
  EXPECT_THROW(Selector(4, {2, 1}), DimensionError);
  EXPECT_THROW(Selector(4, {0, 4}), DimensionError);
  EXPECT_THROW(Selector(4, {}), DimensionError);
}

TEST(ApplySelector, PicksIndices) {
  const auto x = seq({7, 3, 5, 2});
  EXPECT_EQ(values(apply_selector(Selector(4, {0, 1}), x)), (std::vector<double>{7, 3}));
  EXPECT_EQ(values(apply_selector(Selector(4, {1, 3}), x)), (std::vector<double>{3, 2}));
  EXPECT_EQ(apply_selector(Selector::identity(4), x), x);
}

TEST(ApplySelector, DimensionMismatch) {
  EXPECT_THROW(apply_selector(Selector(5, {0, 1}), seq({1, 2, 3, 4})), DimensionError);
  EXPECT_THROW(project(Selector(3, {0}), seq({1, 2, 3, 4})), DimensionError);
}

TEST(Project, ZeroFillsOutsideSelector) {
  const auto x = seq({7, 3, 5, 2});
  EXPECT_EQ(values(project(Selector(4, {0, 1}), x)), (std::vector<double>{7, 3, 0, 0}));
  EXPECT_EQ(values(project(Selector(4, {2}), x)), (std::vector<double>{0, 0, 5, 0}));
  EXPECT_EQ(project(Selector::identity(4), x), x);
}

TEST(Coverage, HandEvaluated) {
  EXPECT_EQ(coverage(enumerate_substrings(4, 2)), (std::vector<std::size_t>{1, 2, 2, 1}));
  EXPECT_EQ(coverage(enumerate_all_subsequences(4, 2)), (std::vector<std::size_t>{3, 3, 3, 3}));
  EXPECT_EQ(coverage(SelectorFamily({Selector::identity(4)})), (std::vector<std::size_t>{1, 1, 1, 1}));
}

TEST(ValidateFamily, CoverageRule) {
  EXPECT_TRUE(validate_family(SelectorFamily({Selector(4, {0, 1}), Selector(4, {2, 3})})));
  EXPECT_FALSE(validate_family(SelectorFamily({Selector(4, {0, 1})})));
  for (std::size_t d = 1; d <= 6; ++d)
    for (std::size_t dp = 1; dp <= d; ++dp) EXPECT_TRUE(validate_family(enumerate_all_subsequences(d, dp)));
}

TEST(SelectorFamily, RejectsDuplicatesAndMixedShapes) {
  EXPECT_THROW(SelectorFamily({Selector(4, {0, 1}), Selector(4, {0, 1})}), DimensionError);
  EXPECT_THROW(SelectorFamily({Selector(4, {0, 1}), Selector(4, {2})}), DimensionError);
  EXPECT_THROW(SelectorFamily({Selector(4, {0, 1}), Selector(5, {2, 3})}), DimensionError);
  EXPECT_THROW(SelectorFamily(std::vector<Selector>{}), DimensionError);
}

TEST(Reconstruct, Examples) {
  const auto x = seq({7, 3, 5, 2});
  const auto sub = enumerate_substrings(4, 2);
  EXPECT_EQ(reconstruct(sub, projections_of(sub, x)), x);

  // Coverage [2,2,2]: (1+1)/2, (2+2)/2, (3+3)/2.
  const auto all = enumerate_all_subsequences(3, 2);
  const auto y = seq({1, 2, 3});
  EXPECT_EQ(reconstruct(all, projections_of(all, y)), y);

  const SelectorFamily id({Selector::identity(4)});
  EXPECT_EQ(reconstruct(id, projections_of(id, x)), x);
}

TEST(Reconstruct, Errors) {
  const SelectorFamily partial({Selector(4, {0, 1})});
  const auto x = seq({1, 2, 3, 4});
  EXPECT_THROW(reconstruct(partial, projections_of(partial, x)), CoverageError);
  const auto sub = enumerate_substrings(4, 2);
  auto proj = projections_of(sub, x);
  proj.pop_back();
  EXPECT_THROW(reconstruct(sub, proj), DimensionError);
}

TEST(Enumerate, AllSubsequences) {
  EXPECT_EQ(enumerate_all_subsequences(4, 2).size(), 6u);
  const auto full = enumerate_all_subsequences(3, 3);
  ASSERT_EQ(full.size(), 1u);
  EXPECT_EQ(full.selectors()[0], Selector::identity(3));
  const auto singles = enumerate_all_subsequences(4, 1);
  EXPECT_EQ(singles.size(), 4u);
  EXPECT_EQ(coverage(singles), (std::vector<std::size_t>{1, 1, 1, 1}));
}

TEST(Enumerate, CapAndBounds) {
  EXPECT_THROW(enumerate_all_subsequences(40, 20), EnumerationTooLarge);
  EXPECT_THROW(enumerate_all_subsequences(10, 5, 100), EnumerationTooLarge);
  EXPECT_NO_THROW(enumerate_all_subsequences(10, 5, 252));
  EXPECT_THROW(enumerate_all_subsequences(3, 4), DimensionError);
  EXPECT_THROW(enumerate_all_subsequences(3, 0), DimensionError);
}

TEST(Enumerate, GridPatches) {
  const auto f = enumerate_2d_patches(GridShape(3, 2));
  ASSERT_EQ(f.size(), 4u);
  // Row-major 3x3: top-left window {0,1,3,4}, bottom-right {4,5,7,8}.
  EXPECT_EQ(f.selectors()[0], Selector(9, {0, 1, 3, 4}));
  EXPECT_EQ(f.selectors()[3], Selector(9, {4, 5, 7, 8}));
  const auto cov = coverage(f);
  EXPECT_EQ(cov, (std::vector<std::size_t>{1, 2, 1, 2, 4, 2, 1, 2, 1}));

  EXPECT_EQ(enumerate_2d_patches(GridShape(45, 11)).size(), 1225u);
  const auto whole = enumerate_2d_patches(GridShape(5, 5));
  ASSERT_EQ(whole.size(), 1u);
  EXPECT_EQ(whole.selectors()[0], Selector::identity(25));
  EXPECT_THROW(GridShape(3, 4), DimensionError);
}

TEST(BoundFactor, Examples) {
  EXPECT_DOUBLE_EQ(bound_factor(enumerate_all_subsequences(4, 2)), 2.0);
  EXPECT_DOUBLE_EQ(bound_factor(enumerate_2d_patches(GridShape(45, 11))), 1225.0);
  EXPECT_DOUBLE_EQ(bound_factor(SelectorFamily({Selector::identity(7)})), 1.0);
  EXPECT_THROW(bound_factor(SelectorFamily({Selector(4, {0, 1})})), CoverageError);
}

TEST(ClosedFormFactors, Examples) {
  const auto f = corollary_factors(4, 2, 45, 11);
  EXPECT_DOUBLE_EQ(f.all_subsequences, 2.0);
  EXPECT_DOUBLE_EQ(f.grid_patches, 1225.0);
  EXPECT_DOUBLE_EQ(corollary_factors(9, 9, 3, 3).all_subsequences, 1.0);
  EXPECT_DOUBLE_EQ(corollary_factors(9, 9, 3, 3).grid_patches, 1.0);
}

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(4, 2), 6u);
  EXPECT_EQ(binomial(10, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(60, 30), 118264581564861424ULL);
}

// Properties over random inputs.

TEST(AlgebraProperty, BoundFactorMatchesCorollaries) {
  for (std::size_t d = 1; d <= 10; ++d)
    for (std::size_t dp = 1; dp <= d; ++dp) {
      const auto fam = enumerate_all_subsequences(d, dp);
      EXPECT_EQ(fam.size(), binomial(d, dp));
      const auto cov = coverage(fam);
      for (auto c : cov) EXPECT_EQ(c, binomial(d - 1, dp - 1));
      EXPECT_EQ(bound_factor(fam), corollary_factors(d, dp, 1, 1).all_subsequences) << d << "," << dp;
    }
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::size_t np = 1; np <= n; ++np) {
      const auto fam = enumerate_2d_patches(GridShape(n, np));
      EXPECT_EQ(bound_factor(fam), corollary_factors(1, 1, n, np).grid_patches) << n << "," << np;
    }
}

SelectorFamily random_valid_family(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<std::size_t> dd(1, 9);
  const std::size_t d = dd(rng);
  const std::size_t dp = std::uniform_int_distribution<std::size_t>(1, d)(rng);
  switch (kind(rng)) {
  case 0: return enumerate_substrings(d, dp);
  case 1: return enumerate_all_subsequences(d, dp);
  case 2: {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    return enumerate_2d_patches(GridShape(n, std::uniform_int_distribution<std::size_t>(1, n)(rng)));
  }
  default: {
    // Random subset of f_L* topped up until every index is covered.
    auto all = enumerate_all_subsequences(d, dp);
    std::vector<Selector> pool(all.selectors().begin(), all.selectors().end());
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<Selector> chosen;
    std::vector<bool> covered(d, false);
    for (const auto& s : pool) {
      bool adds = false;
      for (auto i : s.indices()) adds |= !covered[i];
      if (adds || std::bernoulli_distribution(0.3)(rng)) {
        chosen.push_back(s);
        for (auto i : s.indices()) covered[i] = true;
      }
    }
    return SelectorFamily(std::move(chosen));
  }
  }
}

TEST(AlgebraProperty, ReconstructionIdentity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto fam = random_valid_family(rng);
    ASSERT_TRUE(validate_family(fam));
    std::vector<double> v(fam.domain());
    for (auto& x : v) x = nd(rng);
    const Sequence x(v);
    const auto back = reconstruct(fam, projections_of(fam, x));
    for (std::size_t i = 0; i < v.size(); ++i) ASSERT_NEAR(back[i], v[i], 1e-12);
  }
}

TEST(AlgebraProperty, DeterministicBoundInequality) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto fam = random_valid_family(rng);
    std::vector<double> a(fam.domain()), b(fam.domain());
    for (auto& x : a) x = nd(rng);
    for (auto& x : b) x = nd(rng);
    const auto sides = theorem1_deterministic_check(Sequence(a), Sequence(b), fam);
    ASSERT_LE(sides.lhs, sides.rhs + 1e-9);
  }
}

TEST(Serialization, RoundTripsRandomFamilies) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fam = random_valid_family(rng);
    std::stringstream ss;
    write_family(ss, fam);
    const auto back = read_family(ss);
    ASSERT_EQ(back.size(), fam.size());
    for (std::size_t k = 0; k < fam.size(); ++k) ASSERT_EQ(back.selectors()[k], fam.selectors()[k]);
  }
}

TEST(Serialization, TextFormat) {
  std::stringstream ss;
  write_family(ss, enumerate_substrings(4, 2));
  EXPECT_EQ(ss.str(), "d 4 d' 2\n0 1\n1 2\n2 3\n");
  std::istringstream bad("d 4 d' 2\n0 1 2\n");
  EXPECT_THROW(read_family(bad), DataError);
}

} // namespace
} // namespace seqaug
