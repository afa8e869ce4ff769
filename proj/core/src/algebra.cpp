// SPDX-License-Identifier: Apache-2.0
#include "seqaug/algebra.hpp"

#include "seqaug/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

namespace seqaug {

Sequence::Sequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DimensionError("sequence must have length >= 1");
  for (double v : values_)
    if (!std::isfinite(v)) throw DataError("sequence contains a non-finite value");
}

Selector::Selector(std::size_t d, std::vector<std::size_t> indices)
    : d_(d), indices_(std::move(indices)) {
  if (indices_.empty()) throw DimensionError("selector must select at least one index");
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= d_)
      throw DimensionError("selector index " + std::to_string(indices_[k]) +
                           " outside [0, " + std::to_string(d_) + ")");
    if (k > 0 && indices_[k] <= indices_[k - 1])
      throw DimensionError("selector indices must be strictly increasing");
  }
}

Selector Selector::identity(std::size_t d) {
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  return Selector(d, std::move(idx));
}

SelectorFamily::SelectorFamily(std::vector<Selector> selectors)
    : selectors_(std::move(selectors)) {
  if (selectors_.empty()) throw DimensionError("selector family must be non-empty");
  d_ = selectors_.front().domain();
  d_prime_ = selectors_.front().length();
  std::set<std::vector<std::size_t>> seen;
  for (const auto& s : selectors_) {
    if (s.domain() != d_ || s.length() != d_prime_)
      throw DimensionError("selectors in a family must share d and d'");
    if (!seen.emplace(s.indices().begin(), s.indices().end()).second)
      throw DimensionError("duplicate selector in family");
  }
}

GridShape::GridShape(std::size_t n, std::size_t n_prime) : side(n), patch_side(n_prime) {
  if (n == 0 || n_prime == 0 || n_prime > n)
    throw DimensionError("grid shape requires 1 <= n' <= n");
}

namespace {

void check_domain(const Selector& sel, const Sequence& x) {
  if (sel.domain() != x.size())
    throw DimensionError("selector domain " + std::to_string(sel.domain()) +
                         " != sequence length " + std::to_string(x.size()));
}

void require_valid(const SelectorFamily& fam) {
  if (!validate_family(fam)) throw CoverageError("selector family leaves an index uncovered");
}

} // namespace

Sequence apply_selector(const Selector& sel, const Sequence& x) {
  check_domain(sel, x);
  std::vector<double> out;
  out.reserve(sel.length());
  for (std::size_t i : sel.indices()) out.push_back(x[i]);
  return Sequence(std::move(out));
}

Sequence project(const Selector& sel, const Sequence& x) {
  check_domain(sel, x);
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i : sel.indices()) out[i] = x[i];
  return Sequence(std::move(out));
}

std::vector<std::size_t> coverage(const SelectorFamily& fam) {
  std::vector<std::size_t> counts(fam.domain(), 0);
  for (const auto& s : fam.selectors())
    for (std::size_t i : s.indices()) ++counts[i];
  return counts;
}

bool validate_family(const SelectorFamily& fam) noexcept {
  // Shared d and d' are guaranteed by construction.
  const auto counts = coverage(fam);
  return std::ranges::all_of(counts, [](std::size_t c) { return c >= 1; });
}

Sequence reconstruct(const SelectorFamily& fam, std::span<const Sequence> projections) {
  require_valid(fam);
  if (projections.size() != fam.size())
    throw DimensionError("expected " + std::to_string(fam.size()) + " projections, got " +
                         std::to_string(projections.size()));
  const std::size_t d = fam.domain();
  std::vector<double> sum(d, 0.0);
  for (const auto& p : projections) {
    if (p.size() != d) throw DimensionError("projection length differs from family domain");
    for (std::size_t i = 0; i < d; ++i) sum[i] += p[i];
  }
  const auto counts = coverage(fam);
  for (std::size_t i = 0; i < d; ++i) sum[i] /= static_cast<double>(counts[i]);
  return Sequence(std::move(sum));
}

std::vector<Sequence> projections_of(const SelectorFamily& fam, const Sequence& x) {
  std::vector<Sequence> out;
  out.reserve(fam.size());
  for (const auto& s : fam.selectors()) out.push_back(project(s, x));
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // Multiplicative form; each partial product is itself a binomial so the
  // division is exact.
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    const auto g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t q = num / (i / g);
    if (r != 0 && q > std::numeric_limits<std::uint64_t>::max() / r)
      return std::numeric_limits<std::uint64_t>::max();
    result = r * q;
  }
  return result;
}

SelectorFamily enumerate_all_subsequences(std::size_t d, std::size_t d_prime,
                                          std::uint64_t cap) {
  if (d_prime == 0 || d_prime > d) throw DimensionError("enumeration requires 1 <= d' <= d");
  const std::uint64_t count = binomial(d, d_prime);
  if (count > cap)
    throw EnumerationTooLarge("C(" + std::to_string(d) + "," + std::to_string(d_prime) +
                              ") exceeds the enumeration cap " + std::to_string(cap));
  std::vector<Selector> out;
  out.reserve(count);
  std::vector<std::size_t> idx(d_prime);
  for (std::size_t k = 0; k < d_prime; ++k) idx[k] = k;
  while (true) {
    out.emplace_back(d, idx);
    // Advance to the next combination in lexicographic order.
    std::size_t k = d_prime;
    while (k > 0 && idx[k - 1] == d - d_prime + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < d_prime; ++j) idx[j] = idx[j - 1] + 1;
  }
  return SelectorFamily(std::move(out));
}

SelectorFamily enumerate_substrings(std::size_t d, std::size_t d_prime) {
  if (d_prime == 0 || d_prime > d) throw DimensionError("substrings require 1 <= d' <= d");
  std::vector<Selector> out;
  out.reserve(d - d_prime + 1);
  for (std::size_t start = 0; start + d_prime <= d; ++start) {
    std::vector<std::size_t> idx(d_prime);
    for (std::size_t k = 0; k < d_prime; ++k) idx[k] = start + k;
    out.emplace_back(d, std::move(idx));
  }
  return SelectorFamily(std::move(out));
}

SelectorFamily enumerate_2d_patches(const GridShape& shape) {
  const std::size_t n = shape.side;
  const std::size_t p = shape.patch_side;
  const std::size_t q = shape.windows_per_axis();
  std::vector<Selector> out;
  out.reserve(q * q);
  for (std::size_t r0 = 0; r0 < q; ++r0) {
    for (std::size_t c0 = 0; c0 < q; ++c0) {
      std::vector<std::size_t> idx;
      idx.reserve(p * p);
      for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c) idx.push_back((r0 + r) * n + (c0 + c));
      out.emplace_back(n * n, std::move(idx));
    }
  }
  return SelectorFamily(std::move(out));
}

double bound_factor(const SelectorFamily& fam) {
  require_valid(fam);
  const auto counts = coverage(fam);
  const auto min_cov = *std::ranges::min_element(counts);
  return static_cast<double>(fam.size()) / static_cast<double>(min_cov);
}

CorollaryFactors corollary_factors(std::size_t d, std::size_t d_prime, std::size_t n,
                                   std::size_t n_prime) {
  if (d_prime == 0 || d_prime > d) throw DimensionError("closed-form factors require 1 <= d' <= d");
  const GridShape shape(n, n_prime);
  const double w = static_cast<double>(shape.windows_per_axis());
  return {static_cast<double>(d) / static_cast<double>(d_prime), w * w};
}

void write_family(std::ostream& os, const SelectorFamily& fam) {
  os << "d " << fam.domain() << " d' " << fam.selector_length() << '\n';
  for (const auto& s : fam.selectors()) {
    bool first = true;
    for (std::size_t i : s.indices()) {
      if (!first) os << ' ';
      os << i;
      first = false;
    }
    os << '\n';
  }
}

SelectorFamily read_family(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("selector family: missing header");
  std::istringstream header(line);
  std::string dkey, dpkey;
  std::size_t d = 0, d_prime = 0;
  if (!(header >> dkey >> d >> dpkey >> d_prime) || dkey != "d" || dpkey != "d'")
    throw DataError("selector family: malformed header '" + line + "'");
  std::vector<Selector> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<std::size_t> idx;
    std::size_t v;
    while (row >> v) idx.push_back(v);
    if (!row.eof()) throw DataError("selector family: bad token on line " + std::to_string(lineno));
    if (idx.size() != d_prime)
      throw DataError("selector family: line " + std::to_string(lineno) + " has " +
                      std::to_string(idx.size()) + " indices, expected " + std::to_string(d_prime));
    out.emplace_back(d, std::move(idx));
  }
  return SelectorFamily(std::move(out));
}

} // namespace seqaug
