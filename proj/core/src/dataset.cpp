// SPDX-License-Identifier: Apache-2.0
#include "seqaug/dataset.hpp"

#include "seqaug/error.hpp"
#include "seqaug/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

namespace seqaug {

Eigen::MatrixXd LabeledDataset::one_hot() const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size()),
                                            static_cast<Eigen::Index>(classes));
  for (std::size_t i = 0; i < size(); ++i)
    y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(labels[i])) = 1.0;
  return y;
}

std::vector<std::size_t> LabeledDataset::supports() const {
  std::vector<std::size_t> s(classes, 0);
  for (std::size_t l : labels) ++s[l];
  return s;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.classes = classes;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= size()) throw DimensionError("subset row out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

Grid LabeledDataset::grid(std::size_t row) const {
  std::vector<double> v(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index c = 0; c < features.cols(); ++c) v[c] = features(static_cast<Eigen::Index>(row), c);
  return Grid::from_sequence(Sequence(std::move(v)));
}

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw DataError("feature rows and labels differ in count");
  for (std::size_t l : labels)
    if (l >= classes) throw DataError("label outside [0, classes)");
  if (!features.allFinite()) throw DataError("features contain non-finite values");
}

LabeledDataset dataset_from_grids(std::span<const Grid> grids, std::span<const std::size_t> labels,
                                  std::size_t classes) {
  if (grids.size() != labels.size()) throw DimensionError("one label per grid required");
  LabeledDataset out;
  out.classes = classes;
  const auto d = grids.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(grids.front().cells());
  out.features.resize(static_cast<Eigen::Index>(grids.size()), d);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (static_cast<Eigen::Index>(grids[i].cells()) != d) throw DimensionError("grids differ in size");
    for (Eigen::Index c = 0; c < d; ++c)
      out.features(static_cast<Eigen::Index>(i), c) = grids[i].values()[c];
  }
  out.labels.assign(labels.begin(), labels.end());
  out.validate();
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = line.find(',', pos);
    out.push_back(line.substr(pos, end == std::string_view::npos ? line.npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& v) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

} // namespace

LabeledDataset read_dataset_csv(std::istream& is, std::size_t classes, const CsvFormat& fmt) {
  if (classes == 0) throw InvalidConfig("class count must be positive");
  if (!fmt.class_tokens.empty() && fmt.class_tokens.size() != classes)
    throw InvalidConfig("class token list must have one token per class");
  auto class_of = [&](std::string_view tok, std::size_t lineno) -> std::size_t {
    tok = trim(tok);
    if (fmt.class_tokens.empty()) {
      std::size_t v = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec == std::errc{} && res.ptr == tok.data() + tok.size() && v < classes) return v;
    } else {
      for (std::size_t c = 0; c < classes; ++c)
        if (fmt.class_tokens[c] == tok) return c;
    }
    throw DataError("line " + std::to_string(lineno) + ": unknown class token '" +
                    std::string(tok) + "'");
  };

  std::vector<double> values;
  std::vector<std::size_t> labels;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  const std::size_t expected = fmt.feature_count + 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (first_content) {
      first_content = false;
      double probe = 0.0;
      if (!parse_double(fields.front(), probe)) continue; // header
    }
    if (fields.size() != expected)
      throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(expected) +
                      " fields, got " + std::to_string(fields.size()));
    for (std::size_t f = 0; f + 1 < fields.size(); ++f) {
      double v = 0.0;
      if (!parse_double(fields[f], v) || !std::isfinite(v))
        throw DataError("line " + std::to_string(lineno) + ": field " + std::to_string(f + 1) +
                        " is not a finite number");
      values.push_back(v);
    }
    labels.push_back(class_of(fields.back(), lineno));
  }
  if (labels.empty()) throw DataError("dataset is empty");
  LabeledDataset out;
  out.classes = classes;
  out.labels = std::move(labels);
  out.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(out.labels.size()),
      static_cast<Eigen::Index>(fmt.feature_count));
  return out;
}

LabeledDataset load_dataset(const std::filesystem::path& path, std::size_t classes,
                            const CsvFormat& fmt) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open dataset " + path.string());
  return read_dataset_csv(is, classes, fmt);
}

void write_dataset_csv(std::ostream& os, const LabeledDataset& data) {
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, data.features(static_cast<Eigen::Index>(i), c));
      os.write(buf, res.ptr - buf);
      os << ',';
    }
    os << data.labels[i] << '\n';
  }
}

std::vector<std::size_t> ratio_counts(std::span<const std::size_t> supports, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidConfig("sampling ratio must lie in (0, 1]");
  std::vector<std::size_t> out;
  out.reserve(supports.size());
  for (std::size_t s : supports)
    out.push_back(static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(s) - 1e-9)));
  return out;
}

std::vector<std::size_t> proportional_counts(std::span<const std::size_t> supports,
                                             std::size_t total) {
  const std::size_t n = std::accumulate(supports.begin(), supports.end(), std::size_t{0});
  if (total > n) throw InvalidConfig("cannot allocate more samples than available");
  std::vector<std::size_t> out(supports.size(), 0);
  if (n == 0) return out;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < supports.size(); ++c) {
    const double exact = static_cast<double>(total) * static_cast<double>(supports[c]) /
                         static_cast<double>(n);
    out[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[c];
    remainders.emplace_back(exact - static_cast<double>(out[c]), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[remainders[k].second];
  return out;
}

std::vector<std::size_t> label_weighted_indices(const LabeledDataset& data,
                                                std::span<const std::size_t> counts,
                                                std::uint64_t seed) {
  if (counts.size() != data.classes) throw DimensionError("one count per class required");
  std::vector<std::vector<std::size_t>> members(data.classes);
  for (std::size_t i = 0; i < data.size(); ++i) members[data.labels[i]].push_back(i);
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < data.classes; ++c) {
    if (counts[c] > members[c].size())
      throw DataError("class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                      " samples, " + std::to_string(counts[c]) + " requested");
    std::mt19937_64 rng(derive_key(seed, c));
    std::shuffle(members[c].begin(), members[c].end(), rng);
    std::vector<std::size_t> pick(members[c].begin(), members[c].begin() + counts[c]);
    std::sort(pick.begin(), pick.end());
    out.insert(out.end(), pick.begin(), pick.end());
  }
  return out;
}

LabeledDataset label_weighted_sample(const LabeledDataset& data, double ratio, std::uint64_t seed) {
  const auto counts = ratio_counts(data.supports(), ratio);
  return data.subset(label_weighted_indices(data, counts, seed));
}

LabeledDataset label_weighted_sample(const LabeledDataset& data,
                                     std::span<const std::size_t> counts, std::uint64_t seed) {
  return data.subset(label_weighted_indices(data, counts, seed));
}

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i)
    if (fold_of_row[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i)
    if (fold_of_row[i] != fold) out.push_back(i);
  return out;
}

FoldAssignment make_split(const LabeledDataset& data, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidConfig("at least two folds required");
  if (folds > data.size())
    throw InvalidConfig("more folds (" + std::to_string(folds) + ") than samples (" +
                        std::to_string(data.size()) + ")");
  FoldAssignment out;
  out.folds = folds;
  out.fold_of_row.assign(data.size(), 0);
  std::vector<std::vector<std::size_t>> members(data.classes);
  for (std::size_t i = 0; i < data.size(); ++i) members[data.labels[i]].push_back(i);
  std::vector<std::size_t> layout;
  std::vector<std::size_t> pooled;
  for (std::size_t c = 0; c < data.classes; ++c) {
    auto& m = members[c];
    if (m.empty()) continue;
    if (m.size() < folds) {
      out.warnings.push_back("class " + std::to_string(c) + " has " + std::to_string(m.size()) +
                             " samples, fewer than " + std::to_string(folds) +
                             " folds; not stratified");
      pooled.insert(pooled.end(), m.begin(), m.end());
      continue;
    }
    std::mt19937_64 rng(derive_key(seed, c));
    std::shuffle(m.begin(), m.end(), rng);
    layout.insert(layout.end(), m.begin(), m.end());
  }
  std::mt19937_64 rng(derive_key(seed, 0x706f6f6cULL));
  std::shuffle(pooled.begin(), pooled.end(), rng);
  layout.insert(layout.end(), pooled.begin(), pooled.end());
  for (std::size_t pos = 0; pos < layout.size(); ++pos) out.fold_of_row[layout[pos]] = pos % folds;
  return out;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& features) {
  if (features.rows() == 0) throw DataError("cannot standardize an empty matrix");
  Standardizer s;
  s.mean = features.colwise().mean();
  const Eigen::MatrixXd centered = features.rowwise() - s.mean;
  s.scale = (centered.array().square().colwise().sum() / static_cast<double>(features.rows())).sqrt();
  for (Eigen::Index c = 0; c < s.scale.size(); ++c)
    if (!(s.scale(c) > 1e-12)) s.scale(c) = 1.0;
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& features) const {
  if (features.cols() != mean.size()) throw DimensionError("standardizer width mismatch");
  return (features.rowwise() - mean).array().rowwise() / scale.array();
}

LabeledDataset make_texture_dataset(const TextureTaskConfig& cfg) {
  if (cfg.classes == 0 || cfg.per_class == 0 || cfg.side < 4)
    throw InvalidConfig("texture task needs classes >= 1, per_class >= 1, side >= 4");
  const std::size_t n = cfg.side;
  std::vector<Grid> grids;
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    for (std::size_t k = 0; k < cfg.per_class; ++k) {
      const CounterRng rng(derive_key(derive_key(cfg.seed, c), k));
      std::uint64_t ctr = 0;
      const double center = (static_cast<double>(c) + 0.5) * static_cast<double>(n) /
                                static_cast<double>(cfg.classes) +
                            (rng.uniform(ctr++) - 0.5) * 3.0;
      const double freq = 0.08 + 0.06 * static_cast<double>(c % 3);
      const double phase = 2.0 * std::numbers::pi * rng.uniform(ctr++);
      const double amp = 0.8 + 0.4 * rng.uniform(ctr++);
      Grid g = Grid::zeros(n);
      for (std::size_t r = 0; r < n; ++r) {
        const double dr = (static_cast<double>(r) - center) / 1.5;
        const double band = amp * std::exp(-0.5 * dr * dr);
        for (std::size_t col = 0; col < n; ++col) {
          const double stripe =
              0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * freq * static_cast<double>(col) + phase);
          g(r, col) = band * stripe + cfg.noise * rng.normal(1000 + r * n + col);
        }
      }
      grids.push_back(std::move(g));
      labels.push_back(c);
    }
  }
  return dataset_from_grids(grids, labels, cfg.classes);
}

} // namespace seqaug
