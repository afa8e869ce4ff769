// SPDX-License-Identifier: Apache-2.0
#include "seqaug/dataset.hpp"
#include "seqaug/generator.hpp"
#include "seqaug/grid.hpp"
#include "seqaug/mlp.hpp"
#include "seqaug/transport.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using seqaug::RowMatrix;

RowMatrix random_points(Eigen::Index m, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RowMatrix r(m, k);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = nd(rng);
  return r;
}

seqaug::Grid random_grid(std::size_t side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(side * side);
  for (auto& x : v) x = nd(rng);
  return seqaug::Grid(side, std::move(v));
}

void BM_ExactW1(benchmark::State& state) {
  const auto m = state.range(0);
  const seqaug::EmpiricalDistribution a(random_points(m, 8, 1)), b(random_points(m, 8, 2));
  for (auto _ : state) benchmark::DoNotOptimize(seqaug::exact_w1(a, b));
  state.SetComplexityN(m);
}
BENCHMARK(BM_ExactW1)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_SlicedWGradient(benchmark::State& state) {
  // Patch sets of a 45x45 grid with 11x11 patches.
  const auto a = random_points(1225, 121, 3), b = random_points(1225, 121, 4);
  const auto proj = seqaug::ProjectionSet::sample(121, state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(seqaug::sliced_w_with_gradient(a, b, proj).loss);
}
BENCHMARK(BM_SlicedWGradient)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PatchExtractScatter(benchmark::State& state) {
  const auto g = random_grid(45, 6);
  for (auto _ : state) {
    const auto p = seqaug::extract_patch_matrix(g, 11);
    benchmark::DoNotOptimize(seqaug::scatter_patches(p, 45, 11).values().data());
  }
}
BENCHMARK(BM_PatchExtractScatter)->Unit(benchmark::kMicrosecond);

void BM_PatchStep(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  seqaug::GeneratorConfig cfg;
  cfg.finest_side = cfg.coarsest_side = side;
  cfg.patch_side = side >= 45 ? 11 : 5;
  const auto current = random_grid(side, 7);
  const RowMatrix target = seqaug::extract_patch_matrix(random_grid(side, 8), cfg.patch_side);
  seqaug::PixelAdamState adam;
  std::uint64_t step = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(seqaug::patch_swd_step(current, target, cfg, step++, &adam).loss);
}
BENCHMARK(BM_PatchStep)->Arg(16)->Arg(45)->Unit(benchmark::kMillisecond);

void BM_GenerateSmokeGrid(benchmark::State& state) {
  seqaug::GeneratorConfig cfg;
  cfg.finest_side = 16;
  cfg.coarsest_side = 10;
  cfg.patch_side = 5;
  cfg.steps_per_scale = 50;
  const auto target = random_grid(16, 9);
  for (auto _ : state) benchmark::DoNotOptimize(seqaug::gpdm_generate(target, cfg).initial_loss);
}
BENCHMARK(BM_GenerateSmokeGrid)->Unit(benchmark::kMillisecond);

void BM_MlpEpoch(benchmark::State& state) {
  seqaug::MlpConfig cfg;
  cfg.max_epochs = 1;
  cfg.patience_fraction = 1.0;
  const Eigen::MatrixXd x = random_points(908, 2025, 10);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(908, 4);
  for (Eigen::Index i = 0; i < 908; ++i) y(i, i % 4) = 1.0;
  const auto model = seqaug::init_model(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(seqaug::train(model, x, y, cfg).updates);
}
BENCHMARK(BM_MlpEpoch)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
