// SPDX-License-Identifier: Apache-2.0
#include "seqaug/error.hpp"
#include "seqaug/generator.hpp"
#include "seqaug/grid.hpp"
#include "seqaug/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace seqaug {
namespace {

Grid random_grid(std::mt19937_64& rng, std::size_t side) {
  std::normal_distribution<double> nd;
  std::vector<double> v(side * side);
  for (auto& x : v) x = nd(rng);
  return Grid(side, std::move(v));
}

Grid texture(std::size_t side) {
  std::vector<double> v(side * side);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      v[r * side + c] = std::sin(0.9 * static_cast<double>(c)) + 0.5 * std::cos(1.7 * static_cast<double>(r));
  return Grid(side, std::move(v));
}

TEST(Grid, ConstructionAndSequenceView) {
  EXPECT_THROW(Grid(3, std::vector<double>(8)), DimensionError);
  EXPECT_THROW(Grid::from_sequence(Sequence({1, 2, 3})), DimensionError);
  const auto g = Grid::from_sequence(Sequence({1, 2, 3, 4}));
  EXPECT_EQ(g.side(), 2u);
  EXPECT_EQ(g(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(g.mean(), 2.5);
  EXPECT_DOUBLE_EQ(g.stddev(), std::sqrt(1.25));
}

TEST(Resize, IdentityAndConstant) {
  std::mt19937_64 rng(31);
  const auto g = random_grid(rng, 7);
  EXPECT_EQ(resize_bilinear(g, 7), g);
  const Grid flat(5, std::vector<double>(25, 2.5));
  for (std::size_t s : {1u, 3u, 4u, 9u, 12u}) {
    const auto r = resize_bilinear(flat, s);
    for (double v : r.values()) EXPECT_DOUBLE_EQ(v, 2.5);
  }
}

TEST(Resize, HalfPixelUpsample) {
  // 2 -> 4 with half-pixel centers: source x = (i + 0.5) / 2 - 0.5.
  const Grid g(2, {0, 1, 2, 3});
  const auto r = resize_bilinear(g, 4);
  const std::vector<double> row0{0, 0.25, 0.75, 1};
  for (std::size_t c = 0; c < 4; ++c) EXPECT_DOUBLE_EQ(r(0, c), row0[c]);
  EXPECT_DOUBLE_EQ(r(3, 3), 3.0);
  EXPECT_DOUBLE_EQ(r(1, 1), 0.25 * 2 + 0.25);
}

TEST(Patches, CountsAndLayout) {
  std::mt19937_64 rng(32);
  EXPECT_EQ(extract_patches(random_grid(rng, 3), 2).size(), 4);
  const auto big = extract_patches(random_grid(rng, 45), 11);
  EXPECT_EQ(big.size(), 1225);
  EXPECT_EQ(big.dim(), 121);
  const auto g = random_grid(rng, 6);
  const auto whole = extract_patch_matrix(g, 6);
  ASSERT_EQ(whole.rows(), 1);
  for (std::size_t i = 0; i < 36; ++i) EXPECT_EQ(whole(0, static_cast<Eigen::Index>(i)), g.values()[i]);
  EXPECT_THROW(extract_patches(g, 7), DimensionError);
}

TEST(Patches, MatchSelectorFamily) {
  std::mt19937_64 rng(33);
  const auto g = random_grid(rng, 7);
  const auto fam = enumerate_2d_patches(GridShape(7, 3));
  const auto pm = extract_patch_matrix(g, 3);
  ASSERT_EQ(static_cast<std::size_t>(pm.rows()), fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const auto sub = apply_selector(fam.selectors()[k], g.to_sequence());
    for (std::size_t j = 0; j < sub.size(); ++j)
      ASSERT_EQ(pm(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)), sub[j]);
  }
}

TEST(Patches, ScatterIsAdjoint) {
  std::mt19937_64 rng(34);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t side = 3 + static_cast<std::size_t>(trial % 8);
    const std::size_t p = 1 + static_cast<std::size_t>(trial) % side;
    const auto u = random_grid(rng, side);
    RowMatrix w(static_cast<Eigen::Index>((side - p + 1) * (side - p + 1)),
                static_cast<Eigen::Index>(p * p));
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = nd(rng);
    const double lhs = (extract_patch_matrix(u, p).array() * w.array()).sum();
    const auto s = scatter_patches(w, side, p);
    double rhs = 0.0;
    for (std::size_t i = 0; i < u.cells(); ++i) rhs += u.values()[i] * s.values()[i];
    ASSERT_NEAR(lhs, rhs, 1e-10);
  }
  EXPECT_THROW(scatter_patches(RowMatrix(3, 4), 3, 2), DimensionError);
}

TEST(GridIo, CsvRoundTripIsExact) {
  std::mt19937_64 rng(35);
  std::vector<Grid> grids{random_grid(rng, 4), random_grid(rng, 2), Grid(1, {1e-300})};
  std::stringstream ss;
  write_grids_csv(ss, grids);
  EXPECT_EQ(read_grids_csv(ss), grids);
  std::istringstream bad("1,2,3\n");
  EXPECT_THROW(read_grids_csv(bad), DataError);
  std::istringstream nan("1,x,3,4\n");
  EXPECT_THROW(read_grids_csv(nan), DataError);
}

TEST(GridIo, Pgm16Header) {
  const auto path = std::filesystem::temp_directory_path() / "seqaug_test_grid.pgm";
  write_pgm16(path, Grid(2, {0, 1, 2, 3}));
  std::ifstream is(path, std::ios::binary);
  std::string magic;
  std::size_t w = 0, h = 0, maxv = 0;
  is >> magic >> w >> h >> maxv;
  is.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 2u);
  EXPECT_EQ(h, 2u);
  EXPECT_EQ(maxv, 65535u);
  unsigned char px[8];
  is.read(reinterpret_cast<char*>(px), 8);
  EXPECT_EQ(is.gcount(), 8);
  EXPECT_EQ(px[0] * 256 + px[1], 0);
  EXPECT_EQ(px[6] * 256 + px[7], 65535);
  std::filesystem::remove(path);
}

TEST(GeneratorConfig, Validation) {
  GeneratorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.patch_side = 22;
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = {};
  c.scale_rate = 1.0;
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = {};
  c.coarsest_side = 46;
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = {};
  c.num_projections = 0;
  EXPECT_THROW(c.validate(), InvalidConfig);
  EXPECT_EQ(parse_pixel_optimizer("sgd"), PixelOptimizer::sgd);
  EXPECT_THROW(parse_pixel_optimizer("rmsprop"), InvalidConfig);
}

TEST(Pyramid, DefaultSides) {
  const std::vector<std::size_t> expected{45, 43, 41, 39, 37, 35, 33, 31,
                                          30, 28, 27, 26, 24, 23, 22, 21};
  EXPECT_EQ(pyramid_sides(GeneratorConfig{}), expected);
}

TEST(Pyramid, RuleAndTargets) {
  GeneratorConfig c;
  c.finest_side = 12;
  c.coarsest_side = 8;
  c.patch_side = 5;
  EXPECT_EQ(pyramid_sides(c), (std::vector<std::size_t>{12, 11, 10, 9, 8}));
  c.coarsest_side = 12;
  EXPECT_EQ(pyramid_sides(c), (std::vector<std::size_t>{12}));

  std::mt19937_64 rng(36);
  c = GeneratorConfig{};
  const auto target = random_grid(rng, 45);
  const auto pyr = build_pyramid(target, c);
  ASSERT_EQ(pyr.targets.size(), pyr.sides.size());
  EXPECT_EQ(pyr.targets.front(), target);
  for (std::size_t k = 0; k < pyr.sides.size(); ++k) {
    EXPECT_EQ(pyr.targets[k].side(), pyr.sides[k]);
    if (k > 0) {
      EXPECT_LT(pyr.sides[k], pyr.sides[k - 1]);
    }
  }
  EXPECT_THROW(build_pyramid(random_grid(rng, 44), c), DimensionError);
}

GeneratorConfig small_config() {
  GeneratorConfig c;
  c.finest_side = 8;
  c.coarsest_side = 8;
  c.patch_side = 3;
  c.num_projections = 16;
  return c;
}

TEST(PatchStep, AtMinimum) {
  std::mt19937_64 rng(37);
  const auto g = random_grid(rng, 8);
  auto c = small_config();
  c.optimizer = PixelOptimizer::sgd;
  const auto sr = patch_swd_step(g, extract_patch_matrix(g, 3), c, 5);
  EXPECT_EQ(sr.loss, 0.0);
  EXPECT_EQ(sr.grid, g);
}

TEST(PatchStep, SinglePatchIsPlainSlicedStep) {
  std::mt19937_64 rng(38);
  const auto g = random_grid(rng, 4), t = random_grid(rng, 4);
  GeneratorConfig c;
  c.finest_side = c.coarsest_side = c.patch_side = 4;
  c.num_projections = 8;
  c.learning_rate = 0.1;
  c.optimizer = PixelOptimizer::sgd;
  const RowMatrix tp = extract_patch_matrix(t, 4);
  const auto sr = patch_swd_step(g, tp, c, 77);
  const auto proj = ProjectionSet::sample(16, 8, 77);
  const RowMatrix gp = extract_patch_matrix(g, 4);
  const auto plain = sliced_w_with_gradient(gp, tp, proj);
  EXPECT_DOUBLE_EQ(sr.loss, plain.loss);
  for (std::size_t i = 0; i < 16; ++i)
    EXPECT_NEAR(sr.grid.values()[i], g.values()[i] - 0.1 * plain.gradient(0, static_cast<Eigen::Index>(i)),
                1e-15);
}

TEST(PatchStep, Errors) {
  std::mt19937_64 rng(39);
  const auto g = random_grid(rng, 8);
  auto c = small_config();
  EXPECT_THROW(patch_swd_step(g, extract_patch_matrix(g, 3), c, 1), InvalidConfig);
  c.optimizer = PixelOptimizer::sgd;
  EXPECT_THROW(patch_swd_step(g, extract_patch_matrix(g, 4), c, 1), DimensionError);
}

TEST(PatchStep, DescentUnderFixedDirections) {
  // Same directions before and after: a small step never increases the loss
  // beyond first-order error.
  std::mt19937_64 rng(40);
  auto c = small_config();
  c.optimizer = PixelOptimizer::sgd;
  c.learning_rate = 1e-3;
  for (int trial = 0; trial < 100; ++trial) {
    const auto cur = random_grid(rng, 8), tgt = random_grid(rng, 8);
    const RowMatrix tp = extract_patch_matrix(tgt, 3);
    const auto seed = static_cast<std::uint64_t>(trial);
    const auto sr = patch_swd_step(cur, tp, c, seed);
    const auto proj = ProjectionSet::sample(9, 16, seed);
    EXPECT_LE(patch_swd_loss(sr.grid, tp, 3, proj).loss, sr.loss + 1e-12) << trial;
  }
}

TEST(PatchStep, DescentOverTenFreshSteps) {
  // Fresh directions each step: monotone over 10 steps in >= 95 of 100 trials.
  std::mt19937_64 rng(41);
  auto c = small_config();
  c.optimizer = PixelOptimizer::sgd;
  c.learning_rate = 1e-3;
  int monotone = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto cur = random_grid(rng, 8);
    const RowMatrix tp = extract_patch_matrix(random_grid(rng, 8), 3);
    std::vector<double> losses;
    for (std::uint64_t step = 0; step <= 10; ++step) {
      const std::uint64_t seed = derive_key(static_cast<std::uint64_t>(trial), step);
      // Loss on a fixed large direction set tracks the true sliced distance.
      losses.push_back(patch_swd_loss(cur, tp, 3, ProjectionSet::sample(9, 512, 999)).loss);
      if (step < 10) cur = patch_swd_step(cur, tp, c, seed).grid;
    }
    bool ok = true;
    for (std::size_t k = 1; k < losses.size(); ++k) ok &= losses[k] <= losses[k - 1];
    monotone += ok;
  }
  EXPECT_GE(monotone, 95);
}

TEST(Generate, SingleScaleNoNoiseNoSteps) {
  std::mt19937_64 rng(42);
  const auto t = random_grid(rng, 8);
  auto c = small_config();
  c.noise_sigma = 0.0;
  c.steps_per_scale = 0;
  const auto res = gpdm_generate(t, c);
  EXPECT_EQ(res.output, t);
  ASSERT_EQ(res.per_scale_final_loss.size(), 1u);
  EXPECT_EQ(res.per_scale_final_loss[0], 0.0);
}

GeneratorConfig texture_config(std::uint64_t seed) {
  GeneratorConfig c;
  c.finest_side = 12;
  c.coarsest_side = 8;
  c.patch_side = 5;
  c.num_projections = 64;
  c.steps_per_scale = 60;
  c.seed = seed;
  return c;
}

TEST(Generate, SeedsDifferAndBothImprove) {
  const auto t = texture(12);
  const auto a = gpdm_generate(t, texture_config(1));
  const auto b = gpdm_generate(t, texture_config(2));
  EXPECT_GT(max_abs_difference(a.output, b.output), 0.0);
  for (const auto* r : {&a, &b}) {
    EXPECT_EQ(r->per_scale_final_loss.size(), 5u);
    for (double l : r->per_scale_final_loss) {
      EXPECT_TRUE(std::isfinite(l));
      EXPECT_GE(l, 0.0);
    }
    EXPECT_LT(r->per_scale_final_loss.back(), r->initial_loss);
  }
}

TEST(Generate, Deterministic) {
  const auto t = texture(12);
  const auto a = gpdm_generate(t, texture_config(9));
  const auto b = gpdm_generate(t, texture_config(9));
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.per_scale_final_loss, b.per_scale_final_loss);
  EXPECT_EQ(a.initial_loss, b.initial_loss);
}

TEST(Generate, RejectsBadTargets) {
  auto c = texture_config(0);
  EXPECT_THROW(gpdm_generate(texture(11), c), DimensionError);
  auto t = texture(12);
  t(3, 3) = std::nan("");
  EXPECT_THROW(gpdm_generate(t, c), DataError);
}

TEST(Generate, BoundCompatibility) {
  const auto t = texture(12);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto out = gpdm_generate(t, texture_config(s)).output;
    const double delta = verify_def2_estimate(t, out, 5);
    EXPECT_GE(delta, 0.0);
    EXPECT_LE(l1_distance(t, out), 64.0 * delta + 1e-9);
  }
}

TEST(Augment, CountsOrderAndScheduling) {
  std::mt19937_64 rng(43);
  std::vector<Grid> samples{random_grid(rng, 8), random_grid(rng, 8), random_grid(rng, 8)};
  auto c = small_config();
  c.steps_per_scale = 5;
  c.num_projections = 8;
  EXPECT_EQ(augment_dataset(std::span<const Grid>(samples.data(), 1), 1, c).size(), 1u);
  EXPECT_TRUE(augment_dataset(std::span<const Grid>{}, 3, c).empty());
  EXPECT_THROW(augment_dataset(samples, 0, c), InvalidConfig);

  const std::vector<std::size_t> counts{2, 0, 3};
  const auto serial = augment_dataset(samples, counts, c, 1);
  const auto threaded = augment_dataset(samples, counts, c, 3);
  ASSERT_EQ(serial.size(), 5u);
  EXPECT_EQ(serial, threaded);
  auto one = c;
  one.seed = augmentation_seed(c.seed, 2, 1);
  EXPECT_EQ(serial[3], gpdm_generate(samples[2], one).output);
  EXPECT_NE(serial[0], serial[1]);
}

TEST(Augment, ErrorsNameTheSample) {
  std::mt19937_64 rng(44);
  std::vector<Grid> samples{random_grid(rng, 8), random_grid(rng, 7)};
  auto c = small_config();
  c.steps_per_scale = 1;
  try {
    augment_dataset(samples, 1, c);
    FAIL() << "expected an error";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("sample 1"), std::string::npos);
  }
}

TEST(Def2Estimate, HandValues) {
  const Grid t(3, {0, 0, 0, 0, 0, 0, 0, 0, 0});
  const Grid g(3, {1, 0, 0, 0, 2, 0, 0, 0, 0});
  // Windows (0,0) {1,0,0,2}=3, (0,1) {0,0,2,0}=2, (1,0) {0,2,0,0}=2, (1,1) {2,0,0,0}=2.
  EXPECT_DOUBLE_EQ(verify_def2_estimate(t, g, 2), 9.0 / 4.0);
  EXPECT_EQ(verify_def2_estimate(g, g, 2), 0.0);
  EXPECT_THROW(verify_def2_estimate(t, Grid::zeros(4), 2), DimensionError);
}

} // namespace
} // namespace seqaug
