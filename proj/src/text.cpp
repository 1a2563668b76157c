// text.cpp

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

#include "naveval/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace naveval {

namespace {

bool is_separator(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '"':
      return true;
    default:
      return std::isspace(static_cast<unsigned char>(c)) != 0;
  }
}

}  // namespace

Instruction tokenize(std::string_view raw) {
  Instruction instr;
  instr.raw = std::string(raw);
  std::size_t i = 0;
  while (i < raw.size()) {
    if (is_separator(raw[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    std::string tok;
    while (i < raw.size() && !is_separator(raw[i])) {
      tok.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(raw[i]))));
      ++i;
    }
    instr.tokens.push_back(std::move(tok));
    instr.spans.push_back({start, i});
  }
  return instr;
}

bool follows_clause_break(const Instruction &instr, std::size_t i) {
  if (i == 0 || i >= instr.spans.size()) return false;
  for (std::size_t c = instr.spans[i - 1].end; c < instr.spans[i].begin; ++c) {
    if (instr.raw[c] == ',' || instr.raw[c] == '.') return true;
  }
  return false;
}

DirectionTaxonomy::DirectionTaxonomy(std::string name,
                                     std::vector<DirectionClass> classes)
    : name_(std::move(name)), classes_(std::move(classes)) {
  std::set<std::string> labels;
  for (const auto &cls : classes_) {
    if (cls.label.empty())
      throw TaxonomyError("taxonomy '" + name_ + "': empty class label");
    if (!labels.insert(cls.label).second)
      throw TaxonomyError("taxonomy '" + name_ + "': duplicate class label '" +
                          cls.label + "'");
    for (const auto &phrase : cls.phrases) {
      Instruction toks = tokenize(phrase);
      if (toks.empty())
        throw TaxonomyError("taxonomy '" + name_ + "': class '" + cls.label +
                            "' has a phrase with no tokens");
      auto [it, inserted] = phrase_index_.emplace(toks.tokens, cls.label);
      if (!inserted && it->second != cls.label)
        throw TaxonomyError("taxonomy '" + name_ + "': phrase '" + phrase +
                            "' listed under both '" + it->second + "' and '" +
                            cls.label + "'");
      max_phrase_len_ = std::max(max_phrase_len_, toks.size());
    }
  }
}

bool DirectionTaxonomy::has_label(const std::string &label) const {
  return std::any_of(classes_.begin(), classes_.end(),
                     [&](const DirectionClass &c) { return c.label == label; });
}

std::size_t DirectionTaxonomy::longest_match(
    const std::vector<std::string> &tokens, std::size_t pos,
    std::string *label) const {
  if (pos >= tokens.size()) return 0;
  std::size_t limit = std::min(max_phrase_len_, tokens.size() - pos);
  std::vector<std::string> key;
  for (std::size_t len = limit; len >= 1; --len) {
    key.assign(tokens.begin() + pos, tokens.begin() + pos + len);
    auto it = phrase_index_.find(key);
    if (it != phrase_index_.end()) {
      if (label) *label = it->second;
      return len;
    }
  }
  return 0;
}

DirectionTaxonomy DirectionTaxonomy::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw TaxonomyError(std::string("taxonomy JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string() ||
      !doc.contains("classes") || !doc["classes"].is_array())
    throw TaxonomyError(
        "taxonomy JSON must be an object with \"name\" and \"classes\"");
  std::vector<DirectionClass> classes;
  for (const auto &c : doc["classes"]) {
    if (!c.is_object() || !c.contains("label") || !c["label"].is_string() ||
        !c.contains("phrases") || !c["phrases"].is_array())
      throw TaxonomyError(
          "taxonomy class must have string \"label\" and array \"phrases\"");
    DirectionClass cls;
    cls.label = c["label"].get<std::string>();
    for (const auto &p : c["phrases"]) {
      if (!p.is_string())
        throw TaxonomyError("phrase of class '" + cls.label +
                            "' is not a string");
      cls.phrases.push_back(p.get<std::string>());
    }
    classes.push_back(std::move(cls));
  }
  return DirectionTaxonomy(doc["name"].get<std::string>(), std::move(classes));
}

std::string DirectionTaxonomy::to_json() const {
  nlohmann::ordered_json doc;
  doc["name"] = name_;
  doc["classes"] = nlohmann::ordered_json::array();
  for (const auto &c : classes_) {
    nlohmann::ordered_json jc;
    jc["label"] = c.label;
    jc["phrases"] = c.phrases;
    doc["classes"].push_back(jc);
  }
  return doc.dump(2);
}

std::vector<DirectionPhrase> parse_directions(const Instruction &instr,
                                              const DirectionTaxonomy &taxonomy) {
  std::vector<DirectionPhrase> out;
  std::size_t pos = 0;
  std::string label;
  while (pos < instr.size()) {
    std::size_t len = taxonomy.longest_match(instr.tokens, pos, &label);
    if (len == 0) {
      ++pos;
      continue;
    }
    out.push_back({label, {pos, pos + len}});
    pos += len;
  }
  return out;
}

DirectionSequence direction_labels(const std::vector<DirectionPhrase> &phrases) {
  DirectionSequence seq;
  seq.reserve(phrases.size());
  for (const auto &p : phrases) seq.push_back(p.label);
  return seq;
}

VerbLexicon parse_verb_lexicon(std::string_view text) {
  VerbLexicon verbs;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (const auto &tok : tokenize(line).tokens) verbs.insert(tok);
  }
  return verbs;
}

const VerbLexicon &default_verb_lexicon() {
  static const VerbLexicon verbs = {
      "walk",     "go",     "turn",    "stop",   "exit",    "enter",
      "continue", "head",   "move",    "proceed", "take",   "make",
      "veer",     "bear",   "follow",  "pass",   "climb",   "descend",
      "ascend",   "cross",  "leave",   "wait",   "stand",   "face",
      "keep",     "travel", "step",    "reach",  "approach", "circle",
      "pause",    "return", "navigate", "come",  "get",     "run",
      "hang",     "pivot",  "rotate",  "curve",  "stay",    "arrive",
  };
  return verbs;
}

std::vector<SubInstruction> chunk_instruction(const Instruction &instr,
                                              const VerbLexicon &verbs) {
  if (instr.empty())
    throw ChunkError("instruction has no tokens; nothing to chunk");

  std::vector<Span> chunks;
  std::size_t start = 0;
  for (std::size_t i = 1; i < instr.size(); ++i) {
    const auto &tok = instr.tokens[i];
    if (tok == "and" || tok == "then" || follows_clause_break(instr, i)) {
      chunks.push_back({start, i});
      start = i;
    }
  }
  chunks.push_back({start, instr.size()});

  auto has_verb = [&](Span s) {
    for (std::size_t i = s.begin; i < s.end; ++i)
      if (verbs.count(instr.tokens[i])) return true;
    return false;
  };

  std::vector<SubInstruction> out;
  for (const auto &c : chunks) {
    if (!out.empty() && !has_verb(c)) {
      out.back().token_span.end = c.end;
      continue;
    }
    out.push_back({c, out.size() + 1});
  }
  return out;
}

std::string join_tokens(const Instruction &instr, Span span) {
  std::string s;
  for (std::size_t i = span.begin; i < span.end && i < instr.size(); ++i) {
    if (!s.empty()) s.push_back(' ');
    s += instr.tokens[i];
  }
  return s;
}

}  // namespace naveval
