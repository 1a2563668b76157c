// naveval/text.hpp

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
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace naveval {

/// Half-open range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span &) const = default;
};

/// A tokenized instruction. `spans[i]` holds the character range of
/// `tokens[i]` inside `raw`.
struct Instruction {
  std::string raw;
  std::vector<std::string> tokens;
  std::vector<Span> spans;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// Ordered direction-class labels, e.g. {"left", "right"}.
using DirectionSequence = std::vector<std::string>;

/// Lowercases ASCII, treats whitespace and . , ; : ! ? " as separators.
/// Never throws.
Instruction tokenize(std::string_view raw);

/// True if the characters between the previous token and token `i`
/// contain a comma or a period. Always false for token 0.
bool follows_clause_break(const Instruction &instr, std::size_t i);

struct DirectionClass {
  std::string label;
  std::vector<std::string> phrases;
};

class TaxonomyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named set of direction classes, each with its synonym phrases.
/// Construction validates: unique labels, no phrase under two classes,
/// every phrase nonempty after tokenization.
class DirectionTaxonomy {
 public:
  DirectionTaxonomy(std::string name, std::vector<DirectionClass> classes);

  const std::string &name() const { return name_; }
  const std::vector<DirectionClass> &classes() const { return classes_; }
  bool has_label(const std::string &label) const;

  /// Longest phrase (in tokens) matching `tokens` starting at `pos`.
  /// Returns the match length, 0 if nothing matches; `label` is set on a hit.
  std::size_t longest_match(const std::vector<std::string> &tokens,
                            std::size_t pos, std::string *label) const;

  /// Parses the JSON object {"name": ..., "classes": [{"label", "phrases"}]}.
  static DirectionTaxonomy from_json(std::string_view json_text);
  std::string to_json() const;

 private:
  std::string name_;
  std::vector<DirectionClass> classes_;
  // tokenized phrase -> class label
  std::map<std::vector<std::string>, std::string> phrase_index_;
  std::size_t max_phrase_len_ = 0;
};

/// Bundled taxonomies: "r2r" (right/left/around) and "urban"
/// (right/left plus nine through three o'clock).
DirectionTaxonomy builtin_taxonomy(std::string_view name);
std::vector<std::string> builtin_taxonomy_names();

struct DirectionPhrase {
  std::string label;
  Span token_span;

  bool operator==(const DirectionPhrase &) const = default;
};

/// Greedy longest-match scan, left to right, non-overlapping.
std::vector<DirectionPhrase> parse_directions(const Instruction &instr,
                                              const DirectionTaxonomy &taxonomy);

DirectionSequence direction_labels(const std::vector<DirectionPhrase> &phrases);

using VerbLexicon = std::set<std::string>;

/// Default navigation verbs.
const VerbLexicon &default_verb_lexicon();

/// Plain text, one verb per line; '#' starts a comment.
VerbLexicon parse_verb_lexicon(std::string_view text);

struct SubInstruction {
  Span token_span;
  std::size_t index = 0;  // 1-based
};

class ChunkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Splits before "and", "then" and tokens following a comma or period.
/// Chunks without a lexicon verb are merged into their predecessor; the
/// first chunk is always kept. Throws ChunkError on an empty instruction.
std::vector<SubInstruction> chunk_instruction(const Instruction &instr,
                                              const VerbLexicon &verbs);

/// Space-joined tokens of `span`.
std::string join_tokens(const Instruction &instr, Span span);

}  // namespace naveval
