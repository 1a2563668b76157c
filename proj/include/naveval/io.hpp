// naveval/io.hpp

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

// File formats shared by the command-line tools: JSONL instruction
// corpora, corpus score reports, alignment feature files and reports.

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "naveval/align.hpp"
#include "naveval/metric.hpp"
#include "naveval/text.hpp"

namespace naveval {

/// Missing or unreadable input, or inputs that do not fit together.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that parses but violates its documented schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path &path);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// $NAVEVAL_DATA_DIR if set, else the data directory of the source tree.
std::filesystem::path data_dir();

/// "r2r" / "urban" (looked up as <data>/taxonomies/<name>.json, falling back
/// to the compiled-in copy), or a path to a taxonomy JSON file.
DirectionTaxonomy resolve_taxonomy(const std::string &name_or_path);

/// `path` if given, else <data>/verbs.txt, else the compiled-in list.
VerbLexicon resolve_verb_lexicon(const std::string &path = {});

SynonymGroups load_synonyms(const std::string &path);

/// One JSONL record. Candidates carry exactly one text; a reference record
/// may carry several under "references".
struct EvalRecord {
  std::string id;
  std::vector<ScoredText> texts;
};

/// Fields: "id" (string), "text" (nonempty string), optional "tuples"
/// (list of 1-3 element string lists) and "directions" (list of labels).
/// With `allow_multi`, "references": [{text, tuples?, directions?}, ...]
/// may replace "text". Throws SchemaError with the line number.
std::vector<EvalRecord> parse_records(std::istream &in, bool allow_multi,
                                      const std::string &source = "<input>");
std::vector<EvalRecord> read_records(const std::string &path, bool allow_multi);

struct RecordScore {
  std::string id;
  ScoreReport report;
};

struct CorpusReport {
  std::string taxonomy;
  Aggregation aggregation = Aggregation::kMax;
  std::vector<RecordScore> records;  // candidate file order
  double mean_spice = 0;
  double mean_spice_d = 0;
  std::size_t direction_only_records = 0;
  std::size_t unused_references = 0;
};

/// Scores every candidate against its reference record. Throws InputError
/// listing candidate ids that have no reference. Work is split over
/// `threads` workers; the result does not depend on the thread count.
CorpusReport score_corpus(const std::vector<EvalRecord> &candidates,
                          const std::vector<EvalRecord> &references,
                          const DirectionTaxonomy &taxonomy,
                          const SynonymGroups &synonyms, Aggregation aggregation,
                          unsigned threads = 1);

nlohmann::ordered_json to_json(const ScoreReport &report);
nlohmann::ordered_json to_json(const CorpusReport &report);

/// Alignment input: {"sub_instructions", "panoramas", "words": [[real]],
/// "word_to_sub": [int]} plus optional "attention" (N_w x N) and "ce".
struct FeatureSet {
  Eigen::MatrixXd sub_instructions;
  Eigen::MatrixXd panoramas;
  Eigen::MatrixXd words;
  std::vector<std::size_t> word_to_sub;  // 0-based
  std::optional<Eigen::MatrixXd> attention;
  double ce = 0;
};

FeatureSet parse_features(std::string_view json_text);

struct AlignOptions {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double eps = 1e-8;
};

struct AlignmentReport {
  AlignmentMatrix a;
  AlignmentMatrix a_prime;
  double path_cost = 0;
  double l_att = 0;
  double l_nce = 0;
  double ce = 0;
  double total = 0;
  bool attention_supplied = false;
};

AlignmentReport run_alignment(const FeatureSet &features, const AlignOptions &options);

nlohmann::ordered_json to_json(const AlignmentReport &report,
                               const AlignOptions &options);

}  // namespace naveval
