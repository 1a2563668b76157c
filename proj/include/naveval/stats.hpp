// naveval/stats.hpp

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

#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace naveval {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pearson product-moment correlation, clamped to [-1, 1].
/// Throws StatsError on length mismatch, fewer than 2 points, non-finite
/// values, or a constant series.
double pearson(std::span<const double> x, std::span<const double> y);

/// Columns of metric scores keyed by record id, plus the human column.
/// A missing cell is std::nullopt.
struct ScoreTable {
  std::vector<std::string> ids;
  std::vector<std::string> metric_names;
  std::vector<std::vector<std::optional<double>>> metrics;  // [metric][row]
  std::vector<std::optional<double>> human;

  std::size_t rows() const { return ids.size(); }
  void keep_rows(const std::vector<bool> &keep);
};

/// CSV with a header row; first column "id", last column "human". Empty,
/// "NA" and "nan" cells are missing. Throws StatsError on malformed input.
ScoreTable parse_score_table(std::istream &in);

struct MetricCorrelation {
  std::string metric;
  double pearson = 0;
  std::size_t n = 0;
};

struct CorrelationReport {
  std::vector<MetricCorrelation> metrics;  // sorted by pearson, descending
  std::size_t complete_rows = 0;
  std::size_t dropped_rows = 0;
};

/// Drops every row with a missing cell, then correlates each metric
/// column with the human column.
CorrelationReport correlate_metrics(const ScoreTable &table);

}  // namespace naveval
