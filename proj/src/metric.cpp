// metric.cpp

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

#include "naveval/metric.hpp"

#include <cctype>

#include "json.hpp"

namespace naveval {

namespace {

std::string lower(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

SemanticTuple::SemanticTuple(std::vector<std::string> elements)
    : elements_(std::move(elements)) {
  if (elements_.empty() || elements_.size() > 3)
    throw MetricError("semantic tuple must have 1 to 3 elements, got " +
                      std::to_string(elements_.size()));
  for (auto &e : elements_) {
    if (e.empty()) throw MetricError("semantic tuple has an empty element");
    e = lower(std::move(e));
  }
}

SynonymGroups::SynonymGroups(const std::vector<std::vector<std::string>> &groups) {
  for (const auto &g : groups) {
    if (g.empty()) continue;
    const std::string head = lower(g.front());
    for (const auto &w : g) {
      auto [it, inserted] = rep_.emplace(lower(w), head);
      if (!inserted && it->second != head)
        throw MetricError("word '" + w + "' appears in two synonym groups");
    }
  }
}

const std::string &SynonymGroups::canonical(const std::string &word) const {
  auto it = rep_.find(word);
  return it == rep_.end() ? word : it->second;
}

SynonymGroups SynonymGroups::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw MetricError(std::string("synonym JSON: ") + e.what());
  }
  if (!doc.is_array())
    throw MetricError("synonym file must be a JSON list of lists of strings");
  std::vector<std::vector<std::string>> groups;
  for (const auto &g : doc) {
    if (!g.is_array())
      throw MetricError("synonym group must be a list of strings");
    std::vector<std::string> words;
    for (const auto &w : g) {
      if (!w.is_string()) throw MetricError("synonym entry must be a string");
      words.push_back(w.get<std::string>());
    }
    groups.push_back(std::move(words));
  }
  return SynonymGroups(groups);
}

SemanticTupleSet canonicalize(const SemanticTupleSet &tuples,
                              const SynonymGroups &synonyms) {
  SemanticTupleSet out;
  for (const auto &t : tuples) {
    std::vector<std::string> elems;
    elems.reserve(t.arity());
    for (const auto &e : t.elements()) elems.push_back(synonyms.canonical(e));
    out.emplace(std::move(elems));
  }
  return out;
}

std::size_t match_tuples(const SemanticTupleSet &cand,
                         const SemanticTupleSet &ref,
                         const SynonymGroups &synonyms) {
  SemanticTupleSet c = canonicalize(cand, synonyms);
  SemanticTupleSet r = canonicalize(ref, synonyms);
  std::size_t n = 0;
  for (const auto &t : c) n += r.count(t);
  return n;
}

SpiceScore spice_score(const SemanticTupleSet &cand, const SemanticTupleSet &ref,
                       const SynonymGroups &synonyms) {
  double inter = static_cast<double>(match_tuples(cand, ref, synonyms));
  SpiceScore s;
  s.precision = safe_ratio(inter, static_cast<double>(cand.size()));
  s.recall = safe_ratio(inter, static_cast<double>(ref.size()));
  s.f = f_score(s.precision, s.recall);
  return s;
}

ScoreReport score_from_counts(const ScoreCounts &c) {
  ScoreReport r;
  r.counts = c;
  const double inter = static_cast<double>(c.matched_tuples);
  r.pr_s = safe_ratio(inter, static_cast<double>(c.cand_tuples));
  r.re_s = safe_ratio(inter, static_cast<double>(c.ref_tuples));
  r.spice = f_score(r.pr_s, r.re_s);

  const double num = inter + static_cast<double>(c.lcs);
  r.pr_sd = safe_ratio(num, static_cast<double>(c.cand_tuples + c.cand_dirs));
  r.re_sd = safe_ratio(num, static_cast<double>(c.ref_tuples + c.ref_dirs));
  r.spice_d = f_score(r.pr_sd, r.re_sd);
  return r;
}

ScoreReport spice_d_score(const SemanticTupleSet &cand_tuples,
                          const SemanticTupleSet &ref_tuples,
                          const DirectionSequence &cand_dirs,
                          const DirectionSequence &ref_dirs,
                          const SynonymGroups &synonyms) {
  // Canonicalizing can merge tuples, so the denominators use the
  // canonical sets too.
  SemanticTupleSet c = canonicalize(cand_tuples, synonyms);
  SemanticTupleSet r = canonicalize(ref_tuples, synonyms);
  ScoreCounts counts;
  counts.cand_tuples = c.size();
  counts.ref_tuples = r.size();
  counts.matched_tuples = match_tuples(c, r);
  counts.cand_dirs = cand_dirs.size();
  counts.ref_dirs = ref_dirs.size();
  counts.lcs = lcs_length(cand_dirs, ref_dirs);
  return score_from_counts(counts);
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "max") return Aggregation::kMax;
  if (name == "mean") return Aggregation::kMean;
  throw MetricError("unknown aggregation '" + std::string(name) +
                    "' (expected max or mean)");
}

std::string_view to_string(Aggregation agg) {
  return agg == Aggregation::kMax ? "max" : "mean";
}

namespace {

DirectionSequence directions_of(const ScoredText &text,
                                const DirectionTaxonomy &taxonomy) {
  if (!text.directions)
    return direction_labels(parse_directions(text.instruction, taxonomy));
  for (const auto &label : *text.directions)
    if (!taxonomy.has_label(label))
      throw MetricError("direction label '" + label +
                        "' is not a class of taxonomy '" + taxonomy.name() + "'");
  return *text.directions;
}

}  // namespace

ScoreReport score_pair(const ScoredText &candidate,
                       const std::vector<ScoredText> &references,
                       const DirectionTaxonomy &taxonomy,
                       const SynonymGroups &synonyms, Aggregation aggregation) {
  if (references.empty())
    throw MetricError("score_pair needs at least one reference");

  bool direction_only = !candidate.tuples.has_value();
  for (const auto &r : references) direction_only |= !r.tuples.has_value();

  static const SemanticTupleSet kEmpty;
  const DirectionSequence cand_dirs = directions_of(candidate, taxonomy);
  const SemanticTupleSet &cand_tuples =
      direction_only ? kEmpty : *candidate.tuples;

  std::vector<ScoreReport> per_ref;
  per_ref.reserve(references.size());
  for (const auto &r : references) {
    per_ref.push_back(spice_d_score(cand_tuples,
                                    direction_only ? kEmpty : *r.tuples,
                                    cand_dirs, directions_of(r, taxonomy),
                                    synonyms));
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < per_ref.size(); ++i)
    if (per_ref[i].spice_d > per_ref[best].spice_d) best = i;

  ScoreReport out = per_ref[best];
  if (aggregation == Aggregation::kMean) {
    ScoreReport sum;
    for (const auto &r : per_ref) {
      sum.spice += r.spice;
      sum.spice_d += r.spice_d;
      sum.pr_s += r.pr_s;
      sum.re_s += r.re_s;
      sum.pr_sd += r.pr_sd;
      sum.re_sd += r.re_sd;
    }
    const double n = static_cast<double>(per_ref.size());
    out.spice = sum.spice / n;
    out.spice_d = sum.spice_d / n;
    out.pr_s = sum.pr_s / n;
    out.re_s = sum.re_s / n;
    out.pr_sd = sum.pr_sd / n;
    out.re_sd = sum.re_sd / n;
  }
  out.direction_only = direction_only;
  return out;
}

}  // namespace naveval
