// SPDX-License-Identifier: Apache-2.0
//
// Fully connected classifier: ReLU hidden layers, elementwise sigmoid
// outputs, per-unit binary cross-entropy, Adam, early stopping on the
// training loss.
#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace seqaug {

struct MlpConfig {
  std::size_t input_dim = 2025;
  std::vector<std::size_t> hidden{128, 128, 128};
  std::size_t output_dim = 4;
  double learning_rate = 1e-4;
  std::size_t batch_size = 5;
  double patience_fraction = 0.02;
  std::size_t max_epochs = 500;
  double improvement_threshold = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
  /// ceil(patience_fraction * n), at least 1.
  std::size_t patience_updates(std::size_t n) const;
};

struct DenseLayer {
  Eigen::MatrixXd weights; ///< out x in
  Eigen::VectorXd bias;
};

struct Model {
  std::vector<DenseLayer> layers;
  std::uint64_t seed = 0;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;
  /// Layer widths, input first.
  std::vector<std::size_t> dims() const;

  friend bool operator==(const Model& a, const Model& b);
};

/// Uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
Model init_model(const MlpConfig& cfg);

/// Rows of `batch` are samples; returns one row of sigmoid outputs per sample.
Eigen::MatrixXd forward(const Model& model, const Eigen::MatrixXd& batch);
std::vector<std::size_t> predict(const Model& model, const Eigen::MatrixXd& features);

/// Mean binary cross-entropy over all samples and output units.
double bce_loss(const Model& model, const Eigen::MatrixXd& batch, const Eigen::MatrixXd& targets);

/// Gradients in the same layout as Model::layers.
struct Gradients {
  std::vector<DenseLayer> layers;
};

/// Loss and its gradient for one batch.
double loss_and_gradient(const Model& model, const Eigen::MatrixXd& batch,
                         const Eigen::MatrixXd& targets, Gradients& grads);

struct TrainResult {
  Model model;                   ///< snapshot with the lowest recorded loss
  std::vector<double> loss_trace; ///< one entry per batch update, pre-update
  std::size_t best_update = 0;    ///< index into loss_trace of the snapshot
  std::size_t updates = 0;
  std::size_t epochs = 0;
  bool early_stopped = false;
};

/// `targets` holds one-hot rows. Throws DivergenceError on a non-finite loss.
TrainResult train(Model model, const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                  const MlpConfig& cfg);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t parameters_checked = 0;
  bool near_relu_kink = false; ///< some pre-activation within the probe width of 0
};

/// Backprop against central differences (step h). With an all-zero batch only
/// bias gradients are compared.
GradientCheck gradient_check(const Model& model, const Eigen::MatrixXd& batch,
                             const Eigen::MatrixXd& targets, double h = 1e-5);

/// Binary checkpoint: "SEQAUGNN", u64 layer count L, u64 dims[L+1], u64 seed,
/// then per layer the row-major weights and the bias, little-endian f64.
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

} // namespace seqaug
