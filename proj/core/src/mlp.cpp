// SPDX-License-Identifier: Apache-2.0
#include "seqaug/mlp.hpp"

#include "seqaug/error.hpp"
#include "seqaug/rng.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

namespace seqaug {

void MlpConfig::validate() const {
  if (input_dim == 0 || output_dim == 0) throw InvalidConfig("layer widths must be positive");
  for (std::size_t h : hidden)
    if (h == 0) throw InvalidConfig("hidden layer widths must be positive");
  if (!(learning_rate > 0.0)) throw InvalidConfig("learning_rate must be positive");
  if (batch_size == 0) throw InvalidConfig("batch_size must be positive");
  if (!(patience_fraction > 0.0 && patience_fraction <= 1.0))
    throw InvalidConfig("patience_fraction must lie in (0, 1]");
}

std::size_t MlpConfig::patience_updates(std::size_t n) const {
  const auto p = static_cast<std::size_t>(std::ceil(patience_fraction * static_cast<double>(n) - 1e-9));
  return std::max<std::size_t>(p, 1);
}

std::size_t Model::input_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weights.cols());
}

std::size_t Model::output_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weights.rows());
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
  return n;
}

std::vector<std::size_t> Model::dims() const {
  std::vector<std::size_t> d;
  if (layers.empty()) return d;
  d.push_back(input_dim());
  for (const auto& l : layers) d.push_back(static_cast<std::size_t>(l.weights.rows()));
  return d;
}

bool operator==(const Model& a, const Model& b) {
  if (a.seed != b.seed || a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    const auto& x = a.layers[i];
    const auto& y = b.layers[i];
    if (x.weights.rows() != y.weights.rows() || x.weights.cols() != y.weights.cols()) return false;
    if (x.weights != y.weights || x.bias != y.bias) return false;
  }
  return true;
}

Model init_model(const MlpConfig& cfg) {
  cfg.validate();
  Model m;
  m.seed = cfg.seed;
  std::vector<std::size_t> widths{cfg.input_dim};
  widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths.push_back(cfg.output_dim);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(widths[l]);
    const auto out = static_cast<Eigen::Index>(widths[l + 1]);
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    const CounterRng rng(derive_key(cfg.seed, l));
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
    for (Eigen::Index r = 0; r < out; ++r)
      for (Eigen::Index c = 0; c < in; ++c)
        layer.weights(r, c) = bound * (2.0 * rng.uniform(static_cast<std::uint64_t>(r * in + c)) - 1.0);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

namespace {

void check_input(const Model& model, const Eigen::MatrixXd& batch) {
  if (model.layers.empty()) throw InvalidConfig("model has no layers");
  if (static_cast<std::size_t>(batch.cols()) != model.input_dim())
    throw DimensionError("feature width " + std::to_string(batch.cols()) + " != model input " +
                         std::to_string(model.input_dim()));
}

Eigen::MatrixXd affine(const DenseLayer& l, const Eigen::MatrixXd& a) {
  Eigen::MatrixXd z = a * l.weights.transpose();
  z.rowwise() += l.bias.transpose();
  return z;
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return z.unaryExpr([](double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
}

Eigen::MatrixXd logits(const Model& model, const Eigen::MatrixXd& batch,
                       std::vector<Eigen::MatrixXd>* pre = nullptr) {
  Eigen::MatrixXd a = batch;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Eigen::MatrixXd z = affine(model.layers[l], a);
    if (l + 1 == model.layers.size()) return z;
    if (pre) pre->push_back(z);
    a = z.cwiseMax(0.0);
  }
  return a;
}

double bce_from_logits(const Eigen::MatrixXd& z, const Eigen::MatrixXd& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) s += softplus(z(i)) - y(i) * z(i);
  return s / static_cast<double>(z.size());
}

} // namespace

Eigen::MatrixXd forward(const Model& model, const Eigen::MatrixXd& batch) {
  check_input(model, batch);
  return sigmoid(logits(model, batch));
}

std::vector<std::size_t> predict(const Model& model, const Eigen::MatrixXd& features) {
  const Eigen::MatrixXd p = forward(model, features);
  std::vector<std::size_t> out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Eigen::Index arg = 0;
    p.row(i).maxCoeff(&arg);
    out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(arg);
  }
  return out;
}

double bce_loss(const Model& model, const Eigen::MatrixXd& batch, const Eigen::MatrixXd& targets) {
  check_input(model, batch);
  const Eigen::MatrixXd z = logits(model, batch);
  if (targets.rows() != z.rows() || targets.cols() != z.cols())
    throw DimensionError("target shape does not match model output");
  return bce_from_logits(z, targets);
}

double loss_and_gradient(const Model& model, const Eigen::MatrixXd& batch,
                         const Eigen::MatrixXd& targets, Gradients& grads) {
  check_input(model, batch);
  const std::size_t L = model.layers.size();
  std::vector<Eigen::MatrixXd> acts{batch};
  std::vector<Eigen::MatrixXd> pre;
  Eigen::MatrixXd a = batch;
  Eigen::MatrixXd z;
  for (std::size_t l = 0; l < L; ++l) {
    z = affine(model.layers[l], a);
    if (l + 1 < L) {
      pre.push_back(z);
      a = z.cwiseMax(0.0);
      acts.push_back(a);
    }
  }
  if (targets.rows() != z.rows() || targets.cols() != z.cols())
    throw DimensionError("target shape does not match model output");
  const double loss = bce_from_logits(z, targets);

  grads.layers.resize(L);
  Eigen::MatrixXd delta = (sigmoid(z) - targets) / static_cast<double>(z.size());
  for (std::size_t l = L; l-- > 0;) {
    grads.layers[l].weights = delta.transpose() * acts[l];
    grads.layers[l].bias = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = (delta * model.layers[l].weights).cwiseProduct(
          pre[l - 1].unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
    }
  }
  return loss;
}

namespace {

struct AdamMoments {
  std::vector<DenseLayer> m, v;
  std::uint64_t t = 0;
};

void adam_update(Model& model, const Gradients& g, AdamMoments& st, double lr) {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  if (st.m.empty()) {
    for (const auto& l : model.layers) {
      DenseLayer zero{Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()),
                      Eigen::VectorXd::Zero(l.bias.size())};
      st.m.push_back(zero);
      st.v.push_back(zero);
    }
  }
  ++st.t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(st.t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(st.t));
  auto step = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    step(model.layers[l].weights, g.layers[l].weights, st.m[l].weights, st.v[l].weights);
    step(model.layers[l].bias, g.layers[l].bias, st.m[l].bias, st.v[l].bias);
  }
}

} // namespace

TrainResult train(Model model, const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                  const MlpConfig& cfg) {
  cfg.validate();
  check_input(model, features);
  const auto n = static_cast<std::size_t>(features.rows());
  if (n == 0) throw DataError("training set is empty");
  if (static_cast<std::size_t>(targets.rows()) != n ||
      static_cast<std::size_t>(targets.cols()) != model.output_dim())
    throw DimensionError("target matrix shape does not match features and model output");

  TrainResult res;
  res.model = model;
  const std::size_t patience = cfg.patience_updates(n);
  double best = std::numeric_limits<double>::infinity();
  std::size_t stall = 0;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(derive_key(cfg.seed, 0x7368756666ULL));
  AdamMoments adam;
  Gradients grads;
  Eigen::MatrixXd xb, yb;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs && !res.early_stopped; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    ++res.epochs;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t b = std::min(cfg.batch_size, n - start);
      xb.resize(static_cast<Eigen::Index>(b), features.cols());
      yb.resize(static_cast<Eigen::Index>(b), targets.cols());
      for (std::size_t i = 0; i < b; ++i) {
        xb.row(static_cast<Eigen::Index>(i)) = features.row(order[start + i]);
        yb.row(static_cast<Eigen::Index>(i)) = targets.row(order[start + i]);
      }
      const double loss = loss_and_gradient(model, xb, yb, grads);
      if (!std::isfinite(loss))
        throw DivergenceError("classifier loss became non-finite at update " +
                              std::to_string(res.updates));
      res.loss_trace.push_back(loss);
      if (loss < best - cfg.improvement_threshold) {
        best = loss;
        res.model = model;
        res.best_update = res.updates;
        stall = 0;
      } else {
        ++stall;
      }
      adam_update(model, grads, adam, cfg.learning_rate);
      ++res.updates;
      if (stall >= patience) {
        res.early_stopped = true;
        break;
      }
    }
  }
  return res;
}

GradientCheck gradient_check(const Model& model, const Eigen::MatrixXd& batch,
                             const Eigen::MatrixXd& targets, double h) {
  GradientCheck out;
  Gradients g;
  loss_and_gradient(model, batch, targets, g);

  std::vector<Eigen::MatrixXd> pre;
  logits(model, batch, &pre);
  const double margin = 100.0 * h * std::max(1.0, batch.cwiseAbs().maxCoeff());
  for (const auto& z : pre)
    if (z.size() > 0 && z.cwiseAbs().minCoeff() < margin) out.near_relu_kink = true;

  const bool bias_only = batch.isZero(0.0);
  Model probe = model;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = bce_loss(probe, batch, targets);
    param = saved - h;
    const double down = bce_loss(probe, batch, targets);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-7});
    out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic - numeric) / scale);
    ++out.parameters_checked;
  };
  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    auto& layer = probe.layers[l];
    if (!bias_only)
      for (Eigen::Index i = 0; i < layer.weights.size(); ++i)
        check(layer.weights.data()[i], g.layers[l].weights.data()[i]);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) check(layer.bias(i), g.layers[l].bias(i));
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'S', 'E', 'Q', 'A', 'U', 'G', 'N', 'N'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

void put_u64(std::ostream& os, std::uint64_t v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& os, double v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw DataError("checkpoint truncated");
  return to_little(v);
}

double get_f64(std::istream& is) {
  double v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw DataError("checkpoint truncated");
  return to_little(v);
}

} // namespace

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof kMagic);
  const auto dims = model.dims();
  put_u64(os, model.layers.size());
  for (std::size_t d : dims) put_u64(os, d);
  put_u64(os, model.seed);
  for (const auto& l : model.layers) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) put_f64(os, l.weights(r, c));
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) put_f64(os, l.bias(r));
  }
  if (!os) throw DataError("failed writing " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw DataError(path.string() + " is not a model checkpoint");
  const std::uint64_t layers = get_u64(is);
  if (layers == 0 || layers > 1024) throw DataError("checkpoint has implausible layer count");
  std::vector<std::uint64_t> dims(layers + 1);
  for (auto& d : dims) {
    d = get_u64(is);
    if (d == 0 || d > (1u << 24)) throw DataError("checkpoint has implausible layer width");
  }
  Model m;
  m.seed = get_u64(is);
  for (std::uint64_t l = 0; l < layers; ++l) {
    const auto in = static_cast<Eigen::Index>(dims[l]);
    const auto out = static_cast<Eigen::Index>(dims[l + 1]);
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out)};
    for (Eigen::Index r = 0; r < out; ++r)
      for (Eigen::Index c = 0; c < in; ++c) layer.weights(r, c) = get_f64(is);
    for (Eigen::Index r = 0; r < out; ++r) layer.bias(r) = get_f64(is);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

} // namespace seqaug
