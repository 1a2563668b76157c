// knowledge.cpp

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

#include "naveval/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

namespace naveval {

namespace {

std::string lower(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool fact_order(const KnowledgeFact &a, const KnowledgeFact &b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.relation != b.relation) return a.relation < b.relation;
  return a.tail < b.tail;
}

}  // namespace

std::vector<EntitySet> gather_entities(const std::vector<Detection> &detections,
                                       double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw std::invalid_argument("detection threshold must lie in [0, 1]");
  std::map<std::size_t, std::set<std::string>> by_step;
  for (const auto &d : detections) {
    if (d.label.empty()) throw std::invalid_argument("detection with empty label");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
      throw std::invalid_argument("detection '" + d.label +
                                  "' has confidence outside [0, 1]");
    auto &set = by_step[d.step];
    if (d.confidence > threshold) set.insert(d.label);
  }
  std::vector<EntitySet> out;
  out.reserve(by_step.size());
  for (auto &[step, labels] : by_step) out.push_back({step, std::move(labels)});
  return out;
}

KnowledgeBase KnowledgeBase::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw KbError("cannot open knowledge base '" + path + "'");
  return parse(in);
}

KnowledgeBase KnowledgeBase::parse(std::istream &in) {
  KnowledgeBase kb;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4)
      throw KbError("expected 4 tab-separated columns, got " +
                        std::to_string(cols.size()), lineno);
    for (std::size_t c = 0; c < 3; ++c)
      if (cols[c].empty()) throw KbError("empty field in column " + std::to_string(c + 1), lineno);

    double weight = 0;
    const std::string &w = cols[3];
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
    if (ec != std::errc() || ptr != w.data() + w.size() || !std::isfinite(weight))
      throw KbError("weight '" + w + "' is not a finite number", lineno);

    KnowledgeFact fact{lower(cols[0]), cols[1], lower(cols[2]), weight};
    kb.index_[fact.head].push_back(std::move(fact));
  }
  for (auto &[head, facts] : kb.index_)
    std::stable_sort(facts.begin(), facts.end(), fact_order);
  return kb;
}

std::size_t KnowledgeBase::fact_count() const {
  std::size_t n = 0;
  for (const auto &[head, facts] : index_) n += facts.size();
  return n;
}

const std::vector<KnowledgeFact> *KnowledgeBase::facts_for(const std::string &entity) const {
  auto it = index_.find(lower(entity));
  return it == index_.end() ? nullptr : &it->second;
}

std::vector<KnowledgeFact> KnowledgeBase::retrieve(const std::string &entity,
                                                   std::size_t k) const {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  const auto *facts = facts_for(entity);
  if (!facts) return {};
  const std::size_t n = std::min(k, facts->size());
  return {facts->begin(), facts->begin() + static_cast<std::ptrdiff_t>(n)};
}

std::string format_fact(const KnowledgeFact &fact) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), fact.weight);
  return fact.head + '\t' + fact.relation + '\t' + fact.tail + '\t' +
         std::string(buf, ptr);
}

}  // namespace naveval
