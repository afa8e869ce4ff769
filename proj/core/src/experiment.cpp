// SPDX-License-Identifier: Apache-2.0
#include "seqaug/experiment.hpp"

#include "seqaug/error.hpp"
#include "seqaug/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <tuple>

namespace seqaug {

std::string to_string(DatasetKind kind) {
  switch (kind) {
  case DatasetKind::original: return "original";
  case DatasetKind::reduced: return "reduced";
  case DatasetKind::synthetic: return "synthetic";
  }
  return "unknown";
}

DatasetKind parse_dataset_kind(const std::string& name) {
  if (name == "original") return DatasetKind::original;
  if (name == "reduced") return DatasetKind::reduced;
  if (name == "synthetic") return DatasetKind::synthetic;
  throw DataError("unknown dataset kind '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (task < 2) throw InvalidConfig("task needs at least two classes");
  if (reduction_ratios.empty()) throw InvalidConfig("at least one reduction ratio required");
  for (double r : reduction_ratios)
    if (!(r > 0.0 && r <= 1.0)) throw InvalidConfig("reduction ratios must lie in (0, 1]");
  for (const auto& [idx, counts] : explicit_counts) {
    if (idx >= reduction_ratios.size()) throw InvalidConfig("explicit counts for unknown ratio index");
    if (counts.size() != task) throw InvalidConfig("explicit counts need one entry per class");
  }
  if (folds < 2) throw InvalidConfig("folds must be at least 2");
  if (jobs == 0) throw InvalidConfig("jobs must be at least 1");
  generator.validate();
  classifier.validate();
}

std::string cell_name(std::size_t task, double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "C%02zuP%02ld", task, std::lround(ratio * 100.0));
  return buf;
}

double metric_value(const Scores& s, std::size_t metric) {
  switch (metric) {
  case 0: return s.accuracy;
  case 1: return s.precision;
  case 2: return s.recall;
  case 3: return s.f1;
  }
  throw DimensionError("metric index out of range");
}

std::vector<Aggregate> aggregate(const ScoreReport& report) {
  std::vector<Aggregate> out;
  std::vector<std::vector<const ScoreEntry*>> members;
  for (const auto& e : report.entries) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) {
      return a.task == e.task && a.ratio == e.ratio && a.kind == e.kind;
    });
    if (it == out.end()) {
      out.push_back({e.task, e.ratio, e.kind, 0, {}, {}, {}});
      members.emplace_back();
      it = out.end() - 1;
    }
    members[static_cast<std::size_t>(it - out.begin())].push_back(&e);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& agg = out[g];
    const auto& es = members[g];
    agg.count = es.size();
    const double n = static_cast<double>(es.size());
    double mean[4] = {}, var[4] = {};
    for (const auto* e : es)
      for (std::size_t k = 0; k < 4; ++k) mean[k] += metric_value(e->scores, k) / n;
    for (const auto* e : es)
      for (std::size_t k = 0; k < 4; ++k) {
        const double d = metric_value(e->scores, k) - mean[k];
        var[k] += d * d / n;
      }
    agg.mean = {mean[0], mean[1], mean[2], mean[3]};
    agg.stddev = {std::sqrt(var[0]), std::sqrt(var[1]), std::sqrt(var[2]), std::sqrt(var[3])};
    const bool all_confusion =
        std::all_of(es.begin(), es.end(), [](const ScoreEntry* e) { return e->confusion.has_value(); });
    if (all_confusion && !es.empty()) {
      const std::size_t c = es.front()->confusion->classes();
      agg.confusion.assign(c, std::vector<double>(c, 0.0));
      for (const auto* e : es) {
        const auto rn = e->confusion->row_normalized();
        for (std::size_t t = 0; t < c; ++t)
          for (std::size_t p = 0; p < c; ++p) agg.confusion[t][p] += rn[t][p] / n;
      }
    }
  }
  return out;
}

std::vector<std::size_t> synthetic_allocation(std::size_t reduced_size, std::size_t target,
                                              std::uint64_t seed) {
  if (reduced_size == 0) throw DataError("cannot synthesize from an empty reduced set");
  std::vector<std::size_t> counts(reduced_size, target / reduced_size);
  std::vector<std::size_t> order(reduced_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 0; k < target % reduced_size; ++k) ++counts[order[k]];
  return counts;
}

Metrics train_and_score(const LabeledDataset& train, const LabeledDataset& test,
                        const MlpConfig& cfg) {
  MlpConfig local = cfg;
  local.input_dim = train.feature_dim();
  local.output_dim = train.classes;
  const auto standardizer = Standardizer::fit(train.features);
  const auto result =
      seqaug::train(init_model(local), standardizer.apply(train.features), train.one_hot(), local);
  const auto predicted = predict(result.model, standardizer.apply(test.features));
  return compute_metrics(test.labels, predicted, test.classes);
}

LabeledDataset synthesize(const LabeledDataset& reduced, std::size_t target,
                          const GeneratorConfig& cfg, std::uint64_t seed, unsigned jobs) {
  const auto counts = synthetic_allocation(reduced.size(), target, derive_key(seed, 0x616c6c6fULL));
  std::vector<Grid> grids;
  grids.reserve(reduced.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) grids.push_back(reduced.grid(i));
  GeneratorConfig local = cfg;
  local.seed = seed;
  const auto generated = augment_dataset(grids, counts, local, jobs);
  std::vector<std::size_t> labels;
  labels.reserve(generated.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) labels.insert(labels.end(), counts[i], reduced.labels[i]);
  return dataset_from_grids(generated, labels, reduced.classes);
}

namespace {

std::uint64_t cell_key(std::uint64_t seed, std::size_t task, std::size_t fold, std::size_t ratio_idx,
                       DatasetKind kind) {
  std::uint64_t k = derive_key(seed, task);
  k = derive_key(k, fold);
  k = derive_key(k, ratio_idx);
  return derive_key(k, static_cast<std::uint64_t>(kind) + 1);
}

constexpr std::size_t kNoRatio = static_cast<std::size_t>(-1);

} // namespace

ScoreReport run_experiment(const LabeledDataset& input, const ExperimentConfig& cfg) {
  ScoreReport report;
  report.folds = cfg.folds;
  std::string context = "setup";
  try {
    cfg.validate();
    input.validate();
    if (input.classes != cfg.task)
      throw DataError("dataset has " + std::to_string(input.classes) + " classes, task expects " +
                      std::to_string(cfg.task));
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(input.feature_dim()))));
    if (side * side != input.feature_dim() || side != cfg.generator.finest_side)
      throw DataError("feature width " + std::to_string(input.feature_dim()) +
                      " is not finest_side^2 = " +
                      std::to_string(cfg.generator.finest_side * cfg.generator.finest_side));

    LabeledDataset data = input;
    if (cfg.downsample_size > 0 && data.size() > cfg.downsample_size) {
      const auto counts = proportional_counts(data.supports(), cfg.downsample_size);
      data = data.subset(label_weighted_indices(data, counts, derive_key(cfg.seed, 0x646f776eULL)));
    }
    const auto split = make_split(data, cfg.folds, derive_key(cfg.seed, 0x73706c6974ULL));

    for (std::size_t fold = 0; fold < cfg.folds; ++fold) {
      const auto train_rows = split.train_rows(fold);
      const auto test_rows = split.test_rows(fold);
      const LabeledDataset train = data.subset(train_rows);
      const LabeledDataset test = data.subset(test_rows);

      context = "task " + std::to_string(cfg.task) + ", fold " + std::to_string(fold) + ", original";
      MlpConfig mlp = cfg.classifier;
      mlp.seed = cell_key(cfg.seed, cfg.task, fold, kNoRatio, DatasetKind::original);
      const Metrics original = train_and_score(train, test, mlp);

      for (std::size_t r = 0; r < cfg.reduction_ratios.size(); ++r) {
        const double ratio = cfg.reduction_ratios[r];
        const auto add = [&](DatasetKind kind, const Metrics& m) {
          report.entries.push_back({cfg.task, ratio, kind, fold, Scores::from(m), m.confusion});
        };
        add(DatasetKind::original, original);

        context = "task " + std::to_string(cfg.task) + ", ratio " + cell_name(cfg.task, ratio) +
                  ", fold " + std::to_string(fold);
        const auto it = cfg.explicit_counts.find(r);
        const auto counts =
            it != cfg.explicit_counts.end() ? it->second : ratio_counts(train.supports(), ratio);
        const LabeledDataset reduced = label_weighted_sample(
            train, counts, cell_key(cfg.seed, cfg.task, fold, r, DatasetKind::reduced));
        mlp.seed = cell_key(cfg.seed, cfg.task, fold, r, DatasetKind::reduced) ^ 1;
        add(DatasetKind::reduced, train_and_score(reduced, test, mlp));

        const std::size_t target = cfg.target_train_size > 0 ? cfg.target_train_size : train.size();
        const LabeledDataset synthetic =
            synthesize(reduced, target, cfg.generator,
                       cell_key(cfg.seed, cfg.task, fold, r, DatasetKind::synthetic), cfg.jobs);
        mlp.seed = cell_key(cfg.seed, cfg.task, fold, r, DatasetKind::synthetic) ^ 1;
        add(DatasetKind::synthetic, train_and_score(synthetic, test, mlp));
      }
    }
  } catch (const DivergenceError& e) {
    report.partial = true;
    report.failure = FailureKind::divergence;
    report.error = context + ": " + e.what();
  } catch (const DataError& e) {
    report.partial = true;
    report.failure = FailureKind::data;
    report.error = context + ": " + e.what();
  } catch (const std::exception& e) {
    report.partial = true;
    report.failure = FailureKind::other;
    report.error = context + ": " + e.what();
  }
  return report;
}

} // namespace seqaug

namespace seqaug {

SmokeSetup smoke_setup() {
  SmokeSetup s;
  s.task = TextureTaskConfig{};
  auto& e = s.experiment;
  e.task = s.task.classes;
  e.reduction_ratios = {0.05};
  e.folds = 2;
  e.target_train_size = 0;
  e.downsample_size = 0;
  e.seed = 1;
  e.generator.finest_side = s.task.side;
  e.generator.coarsest_side = 10;
  e.generator.patch_side = 5;
  e.generator.steps_per_scale = 50;
  e.classifier.input_dim = s.task.side * s.task.side;
  e.classifier.output_dim = s.task.classes;
  // 2% of 200 rows is 4 updates, which stops before the first epoch ends.
  e.classifier.patience_fraction = 0.25;
  return s;
}

} // namespace seqaug
