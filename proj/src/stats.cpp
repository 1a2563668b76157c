// stats.cpp

// Copyright 2026  naveval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "naveval/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace naveval {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw StatsError("pearson: series lengths differ (" + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw StatsError("pearson: need at least 2 points");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(x.begin(), x.end(), finite) ||
      !std::all_of(y.begin(), y.end(), finite))
    throw StatsError("pearson: non-finite value");
  auto constant = [](std::span<const double> s) {
    return std::all_of(s.begin(), s.end(), [&](double v) { return v == s[0]; });
  };
  if (constant(x) || constant(y))
    throw StatsError("pearson: correlation undefined for a constant series");

  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

void ScoreTable::keep_rows(const std::vector<bool> &keep) {
  if (keep.size() != rows())
    throw StatsError("row mask has " + std::to_string(keep.size()) + " entries for " +
                     std::to_string(rows()) + " rows");
  auto filter = [&](auto &column) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < column.size(); ++r) {
      if (!keep[r]) continue;
      // Self-move would empty a string.
      if (w != r) column[w] = std::move(column[r]);
      ++w;
    }
    column.resize(w);
  };
  filter(ids);
  filter(human);
  for (auto &col : metrics) filter(col);
}

namespace {

std::string trim(const std::string &s) {
  const char *ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

std::optional<double> parse_cell(const std::string &cell, std::size_t lineno) {
  if (cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN") return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
    throw StatsError("line " + std::to_string(lineno) + ": '" + cell +
                     "' is not a number");
  return v;
}

}  // namespace

ScoreTable parse_score_table(std::istream &in) {
  ScoreTable table;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    header = split_csv(line);
    break;
  }
  if (header.size() < 3 || header.front() != "id" || header.back() != "human")
    throw StatsError(
        "CSV header must start with \"id\", end with \"human\" and name at "
        "least one metric column");
  table.metric_names.assign(header.begin() + 1, header.end() - 1);
  table.metrics.resize(table.metric_names.size());

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw StatsError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " columns, got " +
                       std::to_string(cells.size()));
    table.ids.push_back(cells.front());
    for (std::size_t c = 0; c < table.metric_names.size(); ++c)
      table.metrics[c].push_back(parse_cell(cells[c + 1], lineno));
    table.human.push_back(parse_cell(cells.back(), lineno));
  }
  return table;
}

CorrelationReport correlate_metrics(const ScoreTable &table) {
  std::vector<std::size_t> complete;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    bool ok = table.human[r].has_value();
    for (const auto &col : table.metrics) ok = ok && col[r].has_value();
    if (ok) complete.push_back(r);
  }
  if (complete.size() < 2)
    throw StatsError("need at least 2 complete rows, found " +
                     std::to_string(complete.size()));

  CorrelationReport report;
  report.complete_rows = complete.size();
  report.dropped_rows = table.rows() - complete.size();

  std::vector<double> human;
  for (auto r : complete) human.push_back(*table.human[r]);
  for (std::size_t c = 0; c < table.metric_names.size(); ++c) {
    std::vector<double> metric;
    for (auto r : complete) metric.push_back(*table.metrics[c][r]);
    double rho = 0;
    try {
      rho = pearson(metric, human);
    } catch (const StatsError &e) {
      throw StatsError("metric '" + table.metric_names[c] + "': " + e.what());
    }
    report.metrics.push_back({table.metric_names[c], rho, complete.size()});
  }
  std::stable_sort(report.metrics.begin(), report.metrics.end(),
                   [](const auto &a, const auto &b) { return a.pearson > b.pearson; });
  return report;
}

}  // namespace naveval
