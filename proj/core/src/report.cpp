// SPDX-License-Identifier: Apache-2.0
#include "seqaug/report.hpp"

#include "seqaug/algebra.hpp"
#include "seqaug/error.hpp"
#include "seqaug/transport.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace seqaug {

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

constexpr const char* kScoresHeader = "task,ratio,kind,fold,metric,value,status";

} // namespace

void write_scores_csv(std::ostream& os, const ScoreReport& report) {
  os << kScoresHeader << '\n';
  const char* status = report.partial ? "partial" : "complete";
  for (const auto& e : report.entries)
    for (std::size_t k = 0; k < 4; ++k)
      os << e.task << ',' << num(e.ratio) << ',' << to_string(e.kind) << ',' << e.fold << ','
         << kMetricNames[k] << ',' << num(metric_value(e.scores, k)) << ',' << status << '\n';
}

ScoreReport read_scores_csv(std::istream& is) {
  ScoreReport report;
  std::string line;
  if (!std::getline(is, line)) throw DataError("scores.csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kScoresHeader) throw DataError("scores.csv has an unexpected header");
  std::size_t lineno = 1;
  std::size_t max_fold = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw DataError("scores.csv line " + std::to_string(lineno) + ": expected 7 fields");
    try {
      const std::size_t task = std::stoul(f[0]);
      const double ratio = std::stod(f[1]);
      const DatasetKind kind = parse_dataset_kind(f[2]);
      const std::size_t fold = std::stoul(f[3]);
      const auto metric = std::find(std::begin(kMetricNames), std::end(kMetricNames), f[4]);
      if (metric == std::end(kMetricNames)) throw DataError("unknown metric '" + f[4] + "'");
      const double value = std::stod(f[5]);
      if (f[6] == "partial") report.partial = true;
      else if (f[6] != "complete") throw DataError("unknown status '" + f[6] + "'");
      auto it = std::find_if(report.entries.begin(), report.entries.end(), [&](const ScoreEntry& e) {
        return e.task == task && e.ratio == ratio && e.kind == kind && e.fold == fold;
      });
      if (it == report.entries.end()) {
        report.entries.push_back({task, ratio, kind, fold, {}, std::nullopt});
        it = report.entries.end() - 1;
      }
      double* slots[4] = {&it->scores.accuracy, &it->scores.precision, &it->scores.recall, &it->scores.f1};
      *slots[metric - std::begin(kMetricNames)] = value;
      max_fold = std::max(max_fold, fold + 1);
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      throw DataError("scores.csv line " + std::to_string(lineno) + ": malformed value");
    }
  }
  report.folds = max_fold;
  return report;
}

void write_summary_json(std::ostream& os, const ScoreReport& report) {
  nlohmann::ordered_json j;
  j["partial"] = report.partial;
  if (!report.error.empty()) j["error"] = report.error;
  j["folds"] = report.folds;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& a : aggregate(report)) {
    nlohmann::ordered_json c;
    c["cell"] = cell_name(a.task, a.ratio);
    c["task"] = a.task;
    c["ratio"] = a.ratio;
    c["kind"] = to_string(a.kind);
    c["folds"] = a.count;
    for (std::size_t k = 0; k < 4; ++k) {
      c["mean"][kMetricNames[k]] = metric_value(a.mean, k);
      c["std"][kMetricNames[k]] = metric_value(a.stddev, k);
    }
    if (!a.confusion.empty()) c["confusion_row_normalized"] = a.confusion;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  os << j.dump(2) << '\n';
}

void write_confusion_csv(std::ostream& os, std::span<const Aggregate> cell) {
  std::size_t classes = 0;
  for (const auto& a : cell) classes = std::max(classes, a.confusion.size());
  os << "kind,truth";
  for (std::size_t p = 0; p < classes; ++p) os << ",pred_" << p;
  os << '\n';
  for (const auto& a : cell) {
    for (std::size_t t = 0; t < a.confusion.size(); ++t) {
      os << to_string(a.kind) << ',' << t;
      for (double v : a.confusion[t]) os << ',' << fixed(v, 4);
      os << '\n';
    }
  }
}

void write_metric_svg(std::ostream& os, std::span<const Aggregate> aggregates, std::size_t metric) {
  std::vector<std::pair<std::size_t, double>> cells;
  for (const auto& a : aggregates)
    if (std::find(cells.begin(), cells.end(), std::pair{a.task, a.ratio}) == cells.end())
      cells.emplace_back(a.task, a.ratio);

  constexpr double left = 60, top = 40, plot_h = 300, bar_w = 18, group_gap = 24;
  constexpr const char* colors[3] = {"#4c72b0", "#dd8452", "#55a868"};
  const double group_w = 3 * bar_w + group_gap;
  const double plot_w = std::max(1.0, static_cast<double>(cells.size())) * group_w;
  const double width = left + plot_w + 140, height = top + plot_h + 60;
  auto y_of = [&](double v) { return top + plot_h * (1.0 - std::clamp(v, 0.0, 1.0)); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
     << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"" << fixed(left, 0) << "\" y=\"20\" font-size=\"14\">" << kMetricNames[metric]
     << "</text>\n";
  for (int t = 0; t <= 10; ++t) {
    const double v = t / 10.0;
    os << "<line x1=\"" << fixed(left, 1) << "\" x2=\"" << fixed(left + plot_w, 1) << "\" y1=\""
       << fixed(y_of(v), 1) << "\" y2=\"" << fixed(y_of(v), 1) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << fixed(left - 6, 1) << "\" y=\"" << fixed(y_of(v) + 4, 1)
       << "\" text-anchor=\"end\">" << fixed(v, 1) << "</text>\n";
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double x0 = left + group_gap / 2 + static_cast<double>(c) * group_w;
    for (const auto& a : aggregates) {
      if (a.task != cells[c].first || a.ratio != cells[c].second) continue;
      const auto k = static_cast<std::size_t>(a.kind);
      const double mean = metric_value(a.mean, metric);
      const double sd = metric_value(a.stddev, metric);
      const double x = x0 + static_cast<double>(k) * bar_w;
      os << "<rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y_of(mean), 1) << "\" width=\""
         << fixed(bar_w - 2, 1) << "\" height=\"" << fixed(top + plot_h - y_of(mean), 1)
         << "\" fill=\"" << colors[k] << "\"/>\n";
      const double xm = x + (bar_w - 2) / 2;
      os << "<line x1=\"" << fixed(xm, 1) << "\" x2=\"" << fixed(xm, 1) << "\" y1=\""
         << fixed(y_of(mean - sd), 1) << "\" y2=\"" << fixed(y_of(mean + sd), 1)
         << "\" stroke=\"#000\"/>\n";
    }
    os << "<text x=\"" << fixed(x0 + 1.5 * bar_w, 1) << "\" y=\"" << fixed(top + plot_h + 16, 1)
       << "\" text-anchor=\"middle\">" << cell_name(cells[c].first, cells[c].second) << "</text>\n";
  }
  os << "<line x1=\"" << fixed(left, 1) << "\" x2=\"" << fixed(left + plot_w, 1) << "\" y1=\""
     << fixed(top + plot_h, 1) << "\" y2=\"" << fixed(top + plot_h, 1) << "\" stroke=\"#000\"/>\n";
  for (std::size_t k = 0; k < 3; ++k) {
    const double ly = top + 14.0 * static_cast<double>(k);
    os << "<rect x=\"" << fixed(left + plot_w + 16, 1) << "\" y=\"" << fixed(ly, 1)
       << "\" width=\"10\" height=\"10\" fill=\"" << colors[k] << "\"/>\n";
    os << "<text x=\"" << fixed(left + plot_w + 30, 1) << "\" y=\"" << fixed(ly + 9, 1) << "\">"
       << to_string(static_cast<DatasetKind>(k)) << "</text>\n";
  }
  os << "</svg>\n";
}

std::vector<std::filesystem::path> emit_report(const ScoreReport& report,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& name) {
    const auto path = out_dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path.string());
    written.push_back(path);
    return os;
  };
  {
    auto os = open("scores.csv");
    write_scores_csv(os, report);
  }
  {
    auto os = open("summary.json");
    write_summary_json(os, report);
  }
  const auto aggs = aggregate(report);
  std::vector<Aggregate> cell;
  for (std::size_t i = 0; i < aggs.size(); ++i) {
    cell.push_back(aggs[i]);
    const bool last = i + 1 == aggs.size() || aggs[i + 1].task != aggs[i].task ||
                      aggs[i + 1].ratio != aggs[i].ratio;
    if (!last) continue;
    if (std::any_of(cell.begin(), cell.end(), [](const Aggregate& a) { return !a.confusion.empty(); })) {
      auto os = open("confusion_" + cell_name(cell.front().task, cell.front().ratio) + ".csv");
      write_confusion_csv(os, cell);
    }
    cell.clear();
  }
  for (std::size_t k = 0; k < 4; ++k) {
    auto os = open(std::string(kMetricNames[k]) + ".svg");
    write_metric_svg(os, aggs, k);
  }
  return written;
}

BoundsTable bounds_report(std::span<const Grid> targets, std::span<const Grid> generated,
                          std::size_t patch_side, std::size_t assignment_cap) {
  if (targets.size() != generated.size())
    throw DimensionError("bounds report needs matched target/generated pairs");
  BoundsTable table;
  if (targets.empty()) return table;
  const std::size_t side = targets.front().side();
  const SelectorFamily family = enumerate_2d_patches(GridShape(side, patch_side));
  const double factor = bound_factor(family);
  double delta_sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].side() != side || generated[i].side() != side)
      throw DimensionError("bounds report pair " + std::to_string(i) + " differs in side");
    const Sequence t = targets[i].to_sequence();
    const Sequence g = generated[i].to_sequence();
    const auto sides = theorem1_deterministic_check(t, g, family);
    BoundRow row;
    row.delta_hat = verify_def2_estimate(targets[i], generated[i], patch_side);
    row.lhs = sides.lhs;
    row.factor = factor;
    row.rhs = sides.rhs;
    delta_sum += row.delta_hat;
    table.rows.push_back(row);
  }
  if (targets.size() <= assignment_cap) {
    RowMatrix a(static_cast<Eigen::Index>(targets.size()), static_cast<Eigen::Index>(side * side));
    RowMatrix b(a.rows(), a.cols());
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (std::size_t c = 0; c < side * side; ++c) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = targets[i].values()[c];
        b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = generated[i].values()[c];
      }
    table.has_set_check = true;
    table.set_w1 = exact_w1(EmpiricalDistribution(std::move(a)), EmpiricalDistribution(std::move(b)),
                            static_cast<Eigen::Index>(assignment_cap));
    table.set_bound = factor * delta_sum / static_cast<double>(targets.size());
  }
  return table;
}

void write_bounds_csv(std::ostream& os, const BoundsTable& table) {
  os << "pair,delta_hat,lhs,factor,rhs,slack\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    os << i << ',' << num(r.delta_hat) << ',' << num(r.lhs) << ',' << num(r.factor) << ','
       << num(r.rhs) << ',' << num(r.slack()) << '\n';
  }
  if (table.has_set_check)
    os << "set,," << num(table.set_w1) << ','
       << (table.rows.empty() ? std::string() : num(table.rows.front().factor)) << ','
       << num(table.set_bound) << ',' << num(table.set_bound - table.set_w1) << '\n';
}

} // namespace seqaug
