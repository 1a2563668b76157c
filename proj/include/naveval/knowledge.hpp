// naveval/knowledge.hpp

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
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace naveval {

struct Detection {
  std::string label;
  double confidence = 0;
  std::size_t step = 0;
};

struct EntitySet {
  std::size_t step = 0;
  std::set<std::string> entities;

  bool operator==(const EntitySet &) const = default;
};

inline constexpr double kDefaultDetectionThreshold = 0.5;
inline constexpr std::size_t kDefaultFactsPerEntity = 3;

/// One EntitySet per distinct step, in step order, holding the labels whose
/// confidence is strictly greater than `threshold`.
std::vector<EntitySet> gather_entities(const std::vector<Detection> &detections,
                                       double threshold = kDefaultDetectionThreshold);

struct KnowledgeFact {
  std::string head;
  std::string relation;
  std::string tail;
  double weight = 0;

  bool operator==(const KnowledgeFact &) const = default;
};

class KbError : public std::runtime_error {
 public:
  KbError(const std::string &what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Head entity -> facts, loaded from a 4-column TSV
/// (head, relation, tail, weight). Immutable once built.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  static KnowledgeBase load(const std::string &path);
  static KnowledgeBase parse(std::istream &in);

  std::size_t size() const { return index_.size(); }
  std::size_t fact_count() const;
  const std::vector<KnowledgeFact> *facts_for(const std::string &entity) const;

  /// Top-k facts for `entity` by weight descending, then relation, then
  /// tail ascending. Unknown entities give an empty list.
  std::vector<KnowledgeFact> retrieve(const std::string &entity,
                                      std::size_t k = kDefaultFactsPerEntity) const;

 private:
  std::map<std::string, std::vector<KnowledgeFact>> index_;
};

inline std::vector<KnowledgeFact> retrieve_facts(const KnowledgeBase &kb,
                                                 const std::string &entity,
                                                 std::size_t k = kDefaultFactsPerEntity) {
  return kb.retrieve(entity, k);
}

/// "head\trelation\ttail\tweight" with the shortest round-trip weight.
std::string format_fact(const KnowledgeFact &fact);

}  // namespace naveval
