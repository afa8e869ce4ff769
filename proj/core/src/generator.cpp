// SPDX-License-Identifier: Apache-2.0
#include "seqaug/generator.hpp"

#include "seqaug/error.hpp"
#include "seqaug/parallel.hpp"
#include "seqaug/rng.hpp"

#include <cmath>
#include <numeric>

namespace seqaug {

std::string to_string(PixelOptimizer opt) { return opt == PixelOptimizer::adam ? "adam" : "sgd"; }

PixelOptimizer parse_pixel_optimizer(const std::string& name) {
  if (name == "adam") return PixelOptimizer::adam;
  if (name == "sgd") return PixelOptimizer::sgd;
  throw InvalidConfig("unknown optimizer '" + name + "' (expected adam or sgd)");
}

void GeneratorConfig::validate() const {
  if (finest_side == 0 || coarsest_side == 0) throw InvalidConfig("scale sides must be positive");
  if (coarsest_side > finest_side) throw InvalidConfig("coarsest_side exceeds finest_side");
  if (!(scale_rate > 0.0 && scale_rate < 1.0)) throw InvalidConfig("scale_rate must lie in (0, 1)");
  if (patch_side == 0 || patch_side > coarsest_side)
    throw InvalidConfig("patch_side must lie in [1, coarsest_side]");
  if (num_projections == 0) throw InvalidConfig("num_projections must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw InvalidConfig("learning_rate must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw InvalidConfig("noise_sigma must be non-negative");
}

std::vector<std::size_t> pyramid_sides(const GeneratorConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> sides;
  for (int k = 0;; ++k) {
    const double v = std::round(static_cast<double>(cfg.finest_side) * std::pow(cfg.scale_rate, k));
    if (v < static_cast<double>(cfg.coarsest_side)) break;
    const auto side = static_cast<std::size_t>(v);
    if (sides.empty() || sides.back() != side) sides.push_back(side);
  }
  if (sides.empty() || sides.back() != cfg.coarsest_side) sides.push_back(cfg.coarsest_side);
  return sides;
}

ScalePyramid build_pyramid(const Grid& target, const GeneratorConfig& cfg) {
  if (target.side() != cfg.finest_side)
    throw DimensionError("target side " + std::to_string(target.side()) +
                         " differs from finest_side " + std::to_string(cfg.finest_side));
  ScalePyramid pyr;
  pyr.sides = pyramid_sides(cfg);
  pyr.targets.reserve(pyr.sides.size());
  for (std::size_t side : pyr.sides) pyr.targets.push_back(resize_bilinear(target, side));
  return pyr;
}

PatchLoss patch_swd_loss(const Grid& current, const RowMatrix& target_patches,
                         std::size_t patch_side, const ProjectionSet& proj) {
  const RowMatrix patches = extract_patch_matrix(current, patch_side);
  if (patches.rows() != target_patches.rows() || patches.cols() != target_patches.cols())
    throw DimensionError("current and target patch sets differ in shape");
  auto res = sliced_w_with_gradient(patches, target_patches, proj);
  return {res.loss, scatter_patches(res.gradient, current.side(), patch_side)};
}

StepResult patch_swd_step(const Grid& current, const RowMatrix& target_patches,
                          const GeneratorConfig& cfg, std::uint64_t direction_seed,
                          PixelAdamState* state) {
  const auto dim = static_cast<Eigen::Index>(cfg.patch_side * cfg.patch_side);
  const auto proj =
      ProjectionSet::sample(dim, static_cast<Eigen::Index>(cfg.num_projections), direction_seed);
  PatchLoss pl = patch_swd_loss(current, target_patches, cfg.patch_side, proj);
  StepResult out{current, pl.loss};
  auto px = out.grid.values();
  const auto grad = pl.gradient.values();
  if (cfg.optimizer == PixelOptimizer::sgd) {
    for (std::size_t i = 0; i < px.size(); ++i) px[i] -= cfg.learning_rate * grad[i];
    return out;
  }
  if (state == nullptr) throw InvalidConfig("adam step requires optimizer state");
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  if (state->m.size() != px.size()) {
    state->m.assign(px.size(), 0.0);
    state->v.assign(px.size(), 0.0);
    state->t = 0;
  }
  ++state->t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state->t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state->t));
  for (std::size_t i = 0; i < px.size(); ++i) {
    state->m[i] = beta1 * state->m[i] + (1.0 - beta1) * grad[i];
    state->v[i] = beta2 * state->v[i] + (1.0 - beta2) * grad[i] * grad[i];
    px[i] -= cfg.learning_rate * (state->m[i] / c1) / (std::sqrt(state->v[i] / c2) + eps);
  }
  return out;
}

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

bool all_finite(const Grid& g) {
  for (double v : g.values())
    if (!std::isfinite(v)) return false;
  return true;
}

} // namespace

GenerationResult gpdm_generate(const Grid& target, const GeneratorConfig& cfg) {
  cfg.validate();
  if (!all_finite(target)) throw DataError("generation target has non-finite values");
  const ScalePyramid pyr = build_pyramid(target, cfg);

  GenerationResult result;
  result.seed = cfg.seed;
  Grid current = pyr.targets.back();
  if (cfg.noise_sigma > 0.0) {
    const double sigma = cfg.noise_sigma * target.stddev();
    const CounterRng noise(derive_key(cfg.seed, kNoiseStream));
    auto px = current.values();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] += sigma * noise.normal(i);
  }

  const auto dim = static_cast<Eigen::Index>(cfg.patch_side * cfg.patch_side);
  bool have_initial = false;
  for (std::size_t level = pyr.sides.size(); level-- > 0;) {
    const std::size_t side = pyr.sides[level];
    if (current.side() != side) current = resize_bilinear(current, side);
    const RowMatrix target_patches = extract_patch_matrix(pyr.targets[level], cfg.patch_side);
    const std::uint64_t level_key = derive_key(cfg.seed, level + 1);
    PixelAdamState adam;
    for (std::size_t step = 0; step < cfg.steps_per_scale; ++step) {
      StepResult sr = patch_swd_step(current, target_patches, cfg, derive_key(level_key, step), &adam);
      if (!std::isfinite(sr.loss) || !all_finite(sr.grid))
        throw DivergenceError("generator diverged at scale " + std::to_string(side) + " (level " +
                              std::to_string(level) + ", step " + std::to_string(step) + ")");
      if (!have_initial) {
        result.initial_loss = sr.loss;
        have_initial = true;
      }
      current = std::move(sr.grid);
    }
    const auto eval = ProjectionSet::sample(dim, static_cast<Eigen::Index>(cfg.num_projections),
                                            derive_key(level_key, cfg.steps_per_scale));
    const double final_loss = patch_swd_loss(current, target_patches, cfg.patch_side, eval).loss;
    if (!std::isfinite(final_loss))
      throw DivergenceError("generator diverged at scale " + std::to_string(side));
    if (!have_initial) {
      result.initial_loss = final_loss;
      have_initial = true;
    }
    result.per_scale_final_loss.push_back(final_loss);
  }
  result.output = std::move(current);
  return result;
}

std::uint64_t augmentation_seed(std::uint64_t base, std::size_t sample, std::size_t copy) noexcept {
  return derive_key(base, sample) + copy;
}

std::vector<Grid> augment_dataset(std::span<const Grid> samples,
                                  std::span<const std::size_t> counts,
                                  const GeneratorConfig& cfg, unsigned jobs) {
  if (counts.size() != samples.size())
    throw DimensionError("augment_dataset needs one count per sample");
  cfg.validate();
  struct Job {
    std::size_t sample, copy;
  };
  std::vector<Job> work;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < counts[i]; ++j) work.push_back({i, j});
  std::vector<Grid> out(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t w) {
    const auto [i, j] = work[w];
    GeneratorConfig local = cfg;
    local.seed = augmentation_seed(cfg.seed, i, j);
    const std::string where = "sample " + std::to_string(i) + ": ";
    try {
      out[w] = gpdm_generate(samples[i], local).output;
    } catch (const DivergenceError& e) {
      throw DivergenceError(where + e.what());
    } catch (const DimensionError& e) {
      throw DimensionError(where + e.what());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  });
  return out;
}

std::vector<Grid> augment_dataset(std::span<const Grid> samples, std::size_t per_sample_count,
                                  const GeneratorConfig& cfg, unsigned jobs) {
  if (per_sample_count == 0) throw InvalidConfig("per_sample_count must be at least 1");
  const std::vector<std::size_t> counts(samples.size(), per_sample_count);
  return augment_dataset(samples, counts, cfg, jobs);
}

double verify_def2_estimate(const Grid& target, const Grid& generated, std::size_t patch_side) {
  if (target.side() != generated.side())
    throw DimensionError("target and generated grids differ in side");
  const RowMatrix a = extract_patch_matrix(target, patch_side);
  const RowMatrix b = extract_patch_matrix(generated, patch_side);
  return (a - b).cwiseAbs().sum() / static_cast<double>(a.rows());
}

} // namespace seqaug
