// SPDX-License-Identifier: Apache-2.0
//
// seqaug: one-shot sequence augmentation, transport bound checks and the
// original/reduced/synthetic classification evaluation.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical divergence.
#include "seqaug/config.hpp"
#include "seqaug/error.hpp"
#include "seqaug/experiment.hpp"
#include "seqaug/generator.hpp"
#include "seqaug/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kDivergence = 3 };

/// Config file and per-key flags shared by every subcommand.
struct SettingFlags {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config, "key = value settings file")->check(CLI::ExistingFile);
    for (const auto& key : seqaug::setting_keys()) {
      auto* opt = sub->add_option(std::string("--") + key.name, values[key.name], key.help);
      options.emplace_back(key.name, opt);
    }
  }

  void resolve(seqaug::RunSettings& s) const {
    if (!config.empty()) seqaug::apply_settings(s, seqaug::read_key_value_file(config));
    for (const auto& [name, opt] : options)
      if (opt->count() > 0) seqaug::apply_setting(s, name, values.at(name));
  }
};

std::vector<seqaug::Grid> read_grids(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw seqaug::DataError("cannot open " + path);
  auto grids = seqaug::read_grids_csv(is);
  if (grids.empty()) throw seqaug::DataError(path + " holds no grids");
  return grids;
}

void print_summary(const seqaug::ScoreReport& report) {
  for (const auto& a : seqaug::aggregate(report)) {
    std::printf("%s %-9s acc %.3f+-%.3f  prec %.3f+-%.3f  rec %.3f+-%.3f  f1 %.3f+-%.3f\n",
                seqaug::cell_name(a.task, a.ratio).c_str(), seqaug::to_string(a.kind).c_str(),
                a.mean.accuracy, a.stddev.accuracy, a.mean.precision, a.stddev.precision,
                a.mean.recall, a.stddev.recall, a.mean.f1, a.stddev.f1);
  }
  if (report.partial) std::fprintf(stderr, "partial report: %s\n", report.error.c_str());
}

int report_exit_code(const seqaug::ScoreReport& report) {
  switch (report.failure) {
  case seqaug::FailureKind::none: return kOk;
  case seqaug::FailureKind::divergence: return kDivergence;
  case seqaug::FailureKind::data: return kData;
  case seqaug::FailureKind::other: return kData;
  }
  return kData;
}

int run_augment(const seqaug::RunSettings& s, std::size_t count, bool pgm) {
  if (s.input.empty()) throw seqaug::InvalidConfig("augment requires --input <grids.csv>");
  const auto grids = read_grids(s.input);
  seqaug::GeneratorConfig cfg = s.experiment.generator;
  cfg.seed = s.experiment.seed;
  const auto out = seqaug::augment_dataset(grids, count, cfg, s.experiment.jobs);
  std::filesystem::create_directories(s.out);
  const auto path = std::filesystem::path(s.out) / "synthetic.csv";
  std::ofstream os(path);
  if (!os) throw seqaug::DataError("cannot write " + path.string());
  seqaug::write_grids_csv(os, out);
  if (pgm)
    for (std::size_t i = 0; i < out.size(); ++i)
      seqaug::write_pgm16(std::filesystem::path(s.out) / ("synthetic_" + std::to_string(i) + ".pgm"),
                          out[i]);
  std::printf("wrote %zu synthetic grids to %s\n", out.size(), path.string().c_str());
  return kOk;
}

int run_bounds(const seqaug::RunSettings& s, const std::string& generated_path) {
  if (s.input.empty()) throw seqaug::InvalidConfig("bounds-check requires --input <targets.csv>");
  const auto targets = read_grids(s.input);
  std::vector<seqaug::Grid> generated;
  if (!generated_path.empty()) {
    generated = read_grids(generated_path);
  } else {
    seqaug::GeneratorConfig cfg = s.experiment.generator;
    cfg.seed = s.experiment.seed;
    generated = seqaug::augment_dataset(targets, 1, cfg, s.experiment.jobs);
  }
  const auto table = seqaug::bounds_report(targets, generated, s.experiment.generator.patch_side);
  std::filesystem::create_directories(s.out);
  const auto path = std::filesystem::path(s.out) / "bounds.csv";
  std::ofstream os(path);
  if (!os) throw seqaug::DataError("cannot write " + path.string());
  seqaug::write_bounds_csv(os, table);
  std::size_t violations = 0;
  for (const auto& r : table.rows)
    if (r.lhs > r.rhs + 1e-9) ++violations;
  if (table.has_set_check && table.set_w1 > table.set_bound + 1e-9) ++violations;
  std::printf("%zu pairs, factor %.0f, %zu violations", table.rows.size(),
              table.rows.empty() ? 0.0 : table.rows.front().factor, violations);
  if (table.has_set_check) std::printf(", set W1 %.6g <= %.6g", table.set_w1, table.set_bound);
  std::printf("\nwrote %s\n", path.string().c_str());
  return violations == 0 ? kOk : kDivergence;
}

int run_evaluate(const seqaug::RunSettings& s) {
  if (s.input.empty()) throw seqaug::InvalidConfig("evaluate requires --input <dataset.csv>");
  s.experiment.validate();
  const auto data = seqaug::load_dataset(s.input, s.experiment.task, s.csv);
  const auto report = seqaug::run_experiment(data, s.experiment);
  seqaug::emit_report(report, s.out);
  print_summary(report);
  return report_exit_code(report);
}

int run_report(const std::string& scores, const std::string& out) {
  std::ifstream is(scores);
  if (!is) throw seqaug::DataError("cannot open " + scores);
  const auto report = seqaug::read_scores_csv(is);
  seqaug::emit_report(report, out);
  print_summary(report);
  return kOk;
}

int run_smoke(seqaug::RunSettings s, const seqaug::TextureTaskConfig& task) {
  s.experiment.validate();
  const auto data = seqaug::make_texture_dataset(task);
  const auto report = seqaug::run_experiment(data, s.experiment);
  seqaug::emit_report(report, s.out);
  print_summary(report);
  return report_exit_code(report);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot subsequence-similar sequence augmentation toolkit"};
  app.require_subcommand(1);

  SettingFlags augment_flags, bounds_flags, evaluate_flags, smoke_flags;
  std::size_t count = 1;
  bool pgm = false;
  auto* augment = app.add_subcommand("augment", "generate synthetic grids from a file of grids");
  augment_flags.attach(augment);
  augment->add_option("--count", count, "variants per input grid")->check(CLI::PositiveNumber);
  augment->add_flag("--pgm", pgm, "also write 16-bit PGM images");

  std::string generated;
  auto* bounds = app.add_subcommand("bounds-check", "verify the patch-family transport bound per pair");
  bounds_flags.attach(bounds);
  bounds->add_option("--generated", generated, "generated grids CSV (default: generate one per target)");

  auto* evaluate = app.add_subcommand("evaluate", "original / reduced / synthetic cross-validated evaluation");
  evaluate_flags.attach(evaluate);

  std::string scores;
  std::string report_out = "out";
  auto* report = app.add_subcommand("report", "re-render summary and plots from scores.csv");
  report->add_option("--scores", scores, "scores.csv to read")->required();
  report->add_option("--out", report_out, "output directory");

  auto* smoke = app.add_subcommand("smoke", "run the evaluation on the built-in texture task");
  smoke_flags.attach(smoke);
  auto setup = seqaug::smoke_setup();
  smoke->add_option("--per_class", setup.task.per_class, "texture samples per class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    seqaug::RunSettings settings;
    if (augment->parsed()) {
      augment_flags.resolve(settings);
      return run_augment(settings, count, pgm);
    }
    if (bounds->parsed()) {
      bounds_flags.resolve(settings);
      return run_bounds(settings, generated);
    }
    if (evaluate->parsed()) {
      evaluate_flags.resolve(settings);
      return run_evaluate(settings);
    }
    if (report->parsed()) return run_report(scores, report_out);
    if (smoke->parsed()) {
      settings.experiment = setup.experiment;
      settings.out = "smoke_out";
      smoke_flags.resolve(settings);
      setup.task.classes = settings.experiment.task;
      setup.task.side = settings.experiment.generator.finest_side;
      return run_smoke(settings, setup.task);
    }
  } catch (const seqaug::InvalidConfig& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const seqaug::DivergenceError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kDivergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kData;
  }
  return kUsage;
}
