// SPDX-License-Identifier: Apache-2.0
//
// One-shot generation by patch distribution matching: starting from a noisy,
// downscaled copy of a single target grid, pixels are optimized coarse to
// fine so that the grid's patch distribution matches the target's under the
// sliced Wasserstein distance.
#pragma once

#include "seqaug/grid.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqaug {

enum class PixelOptimizer { adam, sgd };

std::string to_string(PixelOptimizer opt);
PixelOptimizer parse_pixel_optimizer(const std::string& name);

struct GeneratorConfig {
  std::size_t finest_side = 45;
  std::size_t coarsest_side = 21;
  double scale_rate = 0.95;
  std::size_t patch_side = 11;
  std::size_t num_projections = 128;
  double learning_rate = 0.02;
  std::size_t steps_per_scale = 300;
  double noise_sigma = 1.0; ///< in units of the target's standard deviation
  PixelOptimizer optimizer = PixelOptimizer::adam;
  std::uint64_t seed = 0;

  /// Throws InvalidConfig describing the first violated constraint.
  void validate() const;
};

struct ScalePyramid {
  std::vector<std::size_t> sides;  ///< finest first
  std::vector<Grid> targets;       ///< target resampled to each side
};

/// Sides round(finest * rate^k) while >= coarsest, deduplicated, ending at
/// the coarsest side.
std::vector<std::size_t> pyramid_sides(const GeneratorConfig& cfg);
ScalePyramid build_pyramid(const Grid& target, const GeneratorConfig& cfg);

/// First and second moment estimates for Adam on pixels.
struct PixelAdamState {
  std::vector<double> m, v;
  std::uint64_t t = 0;
};

struct StepResult {
  Grid grid;
  double loss = 0.0; ///< before the update
};

/// Pixel-space gradient of the patch sliced-W loss and the loss itself.
struct PatchLoss {
  double loss = 0.0;
  Grid gradient;
};

PatchLoss patch_swd_loss(const Grid& current, const RowMatrix& target_patches,
                         std::size_t patch_side, const ProjectionSet& proj);

/// One optimization step against a fixed set of directions drawn from
/// `direction_seed`. With PixelOptimizer::sgd the update is
/// current - learning_rate * gradient; with adam `state` must be provided.
StepResult patch_swd_step(const Grid& current, const RowMatrix& target_patches,
                          const GeneratorConfig& cfg, std::uint64_t direction_seed,
                          PixelAdamState* state = nullptr);

struct GenerationResult {
  Grid output;
  std::vector<double> per_scale_final_loss; ///< coarsest scale first
  double initial_loss = 0.0;
  std::uint64_t seed = 0;
};

GenerationResult gpdm_generate(const Grid& target, const GeneratorConfig& cfg);

/// Generates counts[i] variants of samples[i] with seeds derived from
/// (cfg.seed, i) plus the copy index. Output is grouped by sample, in order.
std::vector<Grid> augment_dataset(std::span<const Grid> samples,
                                  std::span<const std::size_t> counts,
                                  const GeneratorConfig& cfg, unsigned jobs = 1);
std::vector<Grid> augment_dataset(std::span<const Grid> samples, std::size_t per_sample_count,
                                  const GeneratorConfig& cfg, unsigned jobs = 1);

/// Seed used for copy `copy` of sample `sample`.
std::uint64_t augmentation_seed(std::uint64_t base, std::size_t sample, std::size_t copy) noexcept;

/// Mean L1 distance between co-located patch_side x patch_side windows of
/// the two grids. Upper-bounds the permutation-infimum subsequence distance.
double verify_def2_estimate(const Grid& target, const Grid& generated, std::size_t patch_side);

} // namespace seqaug
