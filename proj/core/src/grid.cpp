// SPDX-License-Identifier: Apache-2.0
#include "seqaug/grid.hpp"

#include "seqaug/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace seqaug {

Grid::Grid(std::size_t side, std::vector<double> values) : side_(side), values_(std::move(values)) {
  if (side_ == 0) throw DimensionError("grid side must be positive");
  if (values_.size() != side_ * side_)
    throw DimensionError("grid of side " + std::to_string(side_) + " needs " +
                         std::to_string(side_ * side_) + " values, got " +
                         std::to_string(values_.size()));
}

Grid Grid::zeros(std::size_t side) { return Grid(side, std::vector<double>(side * side, 0.0)); }

Grid Grid::from_sequence(const Sequence& seq) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(seq.size()))));
  if (n * n != seq.size())
    throw DimensionError("sequence length " + std::to_string(seq.size()) + " is not a square");
  const auto v = seq.values();
  return Grid(n, std::vector<double>(v.begin(), v.end()));
}

double Grid::mean() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return values_.empty() ? 0.0 : s / static_cast<double>(values_.size());
}

double Grid::stddev() const noexcept {
  if (values_.empty()) return 0.0;
  const double mu = mean();
  double s = 0.0;
  for (double v : values_) s += (v - mu) * (v - mu);
  return std::sqrt(s / static_cast<double>(values_.size()));
}

namespace {

struct Tap {
  std::size_t lo, hi;
  double w; // weight of hi
};

std::vector<Tap> taps(std::size_t from, std::size_t to) {
  std::vector<Tap> out(to);
  const double scale = static_cast<double>(from) / static_cast<double>(to);
  for (std::size_t i = 0; i < to; ++i) {
    double x = (static_cast<double>(i) + 0.5) * scale - 0.5;
    x = std::clamp(x, 0.0, static_cast<double>(from - 1));
    const auto lo = static_cast<std::size_t>(std::floor(x));
    const std::size_t hi = std::min(lo + 1, from - 1);
    out[i] = {lo, hi, x - static_cast<double>(lo)};
  }
  return out;
}

} // namespace

Grid resize_bilinear(const Grid& g, std::size_t new_side) {
  if (new_side == 0) throw DimensionError("resize target side must be positive");
  if (new_side == g.side()) return g;
  const std::size_t n = g.side();
  const auto t = taps(n, new_side);
  // Rows first, then columns.
  std::vector<double> rows(new_side * n);
  for (std::size_t r = 0; r < new_side; ++r)
    for (std::size_t c = 0; c < n; ++c)
      rows[r * n + c] = g(t[r].lo, c) * (1.0 - t[r].w) + g(t[r].hi, c) * t[r].w;
  Grid out = Grid::zeros(new_side);
  for (std::size_t r = 0; r < new_side; ++r)
    for (std::size_t c = 0; c < new_side; ++c)
      out(r, c) = rows[r * n + t[c].lo] * (1.0 - t[c].w) + rows[r * n + t[c].hi] * t[c].w;
  return out;
}

RowMatrix extract_patch_matrix(const Grid& g, std::size_t patch_side) {
  const GridShape shape(g.side(), patch_side);
  const std::size_t q = shape.windows_per_axis();
  RowMatrix out(static_cast<Eigen::Index>(q * q), static_cast<Eigen::Index>(patch_side * patch_side));
  Eigen::Index row = 0;
  for (std::size_t r0 = 0; r0 < q; ++r0)
    for (std::size_t c0 = 0; c0 < q; ++c0, ++row) {
      Eigen::Index col = 0;
      for (std::size_t r = 0; r < patch_side; ++r)
        for (std::size_t c = 0; c < patch_side; ++c) out(row, col++) = g(r0 + r, c0 + c);
    }
  return out;
}

EmpiricalDistribution extract_patches(const Grid& g, std::size_t patch_side) {
  return EmpiricalDistribution(extract_patch_matrix(g, patch_side));
}

Grid scatter_patches(const RowMatrix& patches, std::size_t side, std::size_t patch_side) {
  const GridShape shape(side, patch_side);
  const std::size_t q = shape.windows_per_axis();
  if (patches.rows() != static_cast<Eigen::Index>(q * q) ||
      patches.cols() != static_cast<Eigen::Index>(patch_side * patch_side))
    throw DimensionError("patch matrix shape does not match the grid and patch sides");
  Grid out = Grid::zeros(side);
  Eigen::Index row = 0;
  for (std::size_t r0 = 0; r0 < q; ++r0)
    for (std::size_t c0 = 0; c0 < q; ++c0, ++row) {
      Eigen::Index col = 0;
      for (std::size_t r = 0; r < patch_side; ++r)
        for (std::size_t c = 0; c < patch_side; ++c) out(r0 + r, c0 + c) += patches(row, col++);
    }
  return out;
}

double l1_distance(const Grid& a, const Grid& b) {
  if (a.side() != b.side()) throw DimensionError("grids differ in side");
  double s = 0.0;
  for (std::size_t i = 0; i < a.cells(); ++i) s += std::abs(a.values()[i] - b.values()[i]);
  return s;
}

double max_abs_difference(const Grid& a, const Grid& b) {
  if (a.side() != b.side()) throw DimensionError("grids differ in side");
  double m = 0.0;
  for (std::size_t i = 0; i < a.cells(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

void write_grids_csv(std::ostream& os, std::span<const Grid> grids) {
  char buf[32];
  for (const auto& g : grids) {
    bool first = true;
    for (double v : g.values()) {
      if (!first) os << ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      os.write(buf, res.ptr - buf);
      first = false;
    }
    os << '\n';
  }
}

std::vector<Grid> read_grids_csv(std::istream& is) {
  std::vector<Grid> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      while (first < last && *first == ' ') ++first;
      double v = 0.0;
      const auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc{} || !std::isfinite(v))
        throw DataError("grid CSV line " + std::to_string(lineno) + ": bad value");
      values.push_back(v);
      pos = end + 1;
    }
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(values.size()))));
    if (n * n != values.size())
      throw DataError("grid CSV line " + std::to_string(lineno) + ": " +
                      std::to_string(values.size()) + " values is not a square count");
    out.emplace_back(n, std::move(values));
  }
  return out;
}

void write_pgm16(const std::filesystem::path& path, const Grid& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  const auto [lo, hi] = std::ranges::minmax(g.values());
  const double range = hi - lo;
  os << "P5\n" << g.side() << ' ' << g.side() << "\n65535\n";
  for (double v : g.values()) {
    const double unit = range > 0.0 ? (v - lo) / range : 0.0;
    const auto q = static_cast<unsigned>(std::lround(unit * 65535.0));
    // PGM stores 16-bit samples big-endian.
    const char bytes[2] = {static_cast<char>((q >> 8) & 0xff), static_cast<char>(q & 0xff)};
    os.write(bytes, 2);
  }
  if (!os) throw DataError("failed writing " + path.string());
}

} // namespace seqaug
