// naveval/metric.hpp

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

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "naveval/text.hpp"

namespace naveval {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A 1-, 2- or 3-ary proposition: (object), (object, attribute) or
/// (object, relation, object). Elements are lowercased on construction.
class SemanticTuple {
 public:
  explicit SemanticTuple(std::vector<std::string> elements);

  std::size_t arity() const { return elements_.size(); }
  const std::vector<std::string> &elements() const { return elements_; }

  auto operator<=>(const SemanticTuple &) const = default;
  bool operator==(const SemanticTuple &) const = default;

 private:
  std::vector<std::string> elements_;
};

using SemanticTupleSet = std::set<SemanticTuple>;

/// Word -> representative of its synonym group (the group's first member).
class SynonymGroups {
 public:
  SynonymGroups() = default;
  /// Throws MetricError if a word is listed in two different groups.
  explicit SynonymGroups(const std::vector<std::vector<std::string>> &groups);

  const std::string &canonical(const std::string &word) const;
  std::size_t size() const { return rep_.size(); }

  /// JSON list of lists of strings.
  static SynonymGroups from_json(std::string_view json_text);

 private:
  std::map<std::string, std::string> rep_;
};

SemanticTupleSet canonicalize(const SemanticTupleSet &tuples,
                              const SynonymGroups &synonyms);

/// |F^C ∩ F^R| after mapping every element to its synonym representative.
std::size_t match_tuples(const SemanticTupleSet &cand,
                         const SemanticTupleSet &ref,
                         const SynonymGroups &synonyms = {});

/// n / d, or 0 when d == 0.
inline double safe_ratio(double n, double d) { return d == 0.0 ? 0.0 : n / d; }

/// Harmonic mean of precision and recall; 0 when both are 0.
inline double f_score(double precision, double recall) {
  double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

struct SpiceScore {
  double precision = 0;
  double recall = 0;
  double f = 0;
};

SpiceScore spice_score(const SemanticTupleSet &cand, const SemanticTupleSet &ref,
                       const SynonymGroups &synonyms = {});

/// Length of the longest common subsequence. O(|a||b|) time, O(|b|) memory.
template <typename T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t diag = 0;  // row[j] of the previous i
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t up = row[j + 1];
      row[j + 1] = a[i] == b[j] ? diag + 1 : std::max(up, row[j]);
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t lcs_length(const DirectionSequence &a,
                              const DirectionSequence &b) {
  return lcs_length<std::string>(std::span<const std::string>(a),
                                 std::span<const std::string>(b));
}

struct ScoreCounts {
  std::size_t cand_tuples = 0;  // |F^C|
  std::size_t ref_tuples = 0;   // |F^R|
  std::size_t matched_tuples = 0;
  std::size_t cand_dirs = 0;    // N_C
  std::size_t ref_dirs = 0;     // N_R
  std::size_t lcs = 0;

  bool operator==(const ScoreCounts &) const = default;
};

struct ScoreReport {
  double spice = 0;
  double spice_d = 0;
  double pr_s = 0;
  double re_s = 0;
  double pr_sd = 0;
  double re_sd = 0;
  ScoreCounts counts;
  bool direction_only = false;
};

/// Builds the report from raw counts. Every ratio with a zero denominator
/// is 0 and F(0, 0) = 0.
ScoreReport score_from_counts(const ScoreCounts &counts);

ScoreReport spice_d_score(const SemanticTupleSet &cand_tuples,
                          const SemanticTupleSet &ref_tuples,
                          const DirectionSequence &cand_dirs,
                          const DirectionSequence &ref_dirs,
                          const SynonymGroups &synonyms = {});

enum class Aggregation { kMax, kMean };

Aggregation parse_aggregation(std::string_view name);
std::string_view to_string(Aggregation agg);

/// One side of a comparison. Tuples are optional; `directions`, when set,
/// replaces the parse of `instruction`.
struct ScoredText {
  Instruction instruction;
  std::optional<SemanticTupleSet> tuples;
  std::optional<DirectionSequence> directions;
};

/// Scores a candidate against one or more references.
///
/// kMax returns the report of the best reference by SPICE-D (first one on
/// ties). kMean averages every score field over references and keeps the
/// counts of the best reference. If any side lacks tuples, all tuple sets
/// are ignored and the result is flagged direction_only.
ScoreReport score_pair(const ScoredText &candidate,
                       const std::vector<ScoredText> &references,
                       const DirectionTaxonomy &taxonomy,
                       const SynonymGroups &synonyms = {},
                       Aggregation aggregation = Aggregation::kMax);

}  // namespace naveval
