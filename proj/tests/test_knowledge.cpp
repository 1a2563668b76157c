// tests/test_knowledge.cpp

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

#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "naveval/knowledge.hpp"

using namespace naveval;

namespace {

KnowledgeBase kb_from(const std::string &tsv) {
  std::istringstream in(tsv);
  return KnowledgeBase::parse(in);
}

const char *kMicrowave =
    "microwave\tAtLocation\tkitchen\t6.2\n"
    "microwave\tRelatedTo\toven\t4.1\n"
    "microwave\tUsedFor\theating\t3.3\n"
    "microwave\tAtLocation\tgarage\t0.5\n";

}  // namespace

TEST_CASE("gather_entities examples") {
  std::vector<Detection> d = {{"chair", 0.9, 1}, {"table", 0.4, 1}, {"sink", 0.55, 1}};
  auto sets = gather_entities(d);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0].step == 1);
  CHECK(sets[0].entities == std::set<std::string>{"chair", "sink"});

  auto none = gather_entities({{"lamp", 0.1, 0}, {"rug", 0.2, 0}});
  REQUIRE(none.size() == 1);
  CHECK(none[0].entities.empty());

  auto dup = gather_entities({{"chair", 0.9, 2}, {"chair", 0.8, 2}});
  CHECK(dup[0].entities == std::set<std::string>{"chair"});
}

TEST_CASE("gather_entities threshold is strict") {
  auto sets = gather_entities({{"door", 0.5, 0}, {"bed", 0.5000001, 0}});
  CHECK(sets[0].entities == std::set<std::string>{"bed"});
}

TEST_CASE("gather_entities groups by step in order") {
  auto sets = gather_entities({{"a", 0.9, 3}, {"b", 0.9, 1}, {"c", 0.9, 3}});
  REQUIRE(sets.size() == 2);
  CHECK(sets[0].step == 1);
  CHECK(sets[1].step == 3);
  CHECK(sets[1].entities == std::set<std::string>{"a", "c"});
}

TEST_CASE("gather_entities validation") {
  CHECK_THROWS_AS(gather_entities({{"", 0.9, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(gather_entities({{"x", 1.2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(gather_entities({}, 1.5), std::invalid_argument);
}

TEST_CASE("gather_entities properties") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> step(0, 4), label(0, 5);
  const char *labels[] = {"chair", "sofa", "bed", "sink", "lamp", "door"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Detection> d(20);
    for (auto &x : d) x = {labels[label(rng)], conf(rng), step(rng)};
    auto base = gather_entities(d);
    auto shuffled = d;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(gather_entities(shuffled) == base);

    const double lo = conf(rng), hi = std::min(1.0, lo + conf(rng));
    auto a = gather_entities(d, lo), b = gather_entities(d, hi);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::includes(a[i].entities.begin(), a[i].entities.end(),
                          b[i].entities.begin(), b[i].entities.end()));
  }
}

TEST_CASE("load_kb examples") {
  auto kb = kb_from(kMicrowave);
  CHECK(kb.size() == 1);
  CHECK(kb.fact_count() == 4);
  CHECK(kb_from("").size() == 0);
  CHECK(kb_from("# only a comment\n\n").size() == 0);
}

TEST_CASE("load_kb errors name the line") {
  try {
    kb_from("a\tRelatedTo\tb\t1.0\nc\tRelatedTo\td\theavy\n");
    FAIL("expected an error");
  } catch (const KbError &e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(kb_from("a\tb\tc\n"), KbError);
  CHECK_THROWS_AS(kb_from("a\tb\tc\t1\textra\n"), KbError);
  CHECK_THROWS_AS(kb_from("a\t\tc\t1\n"), KbError);
  CHECK_THROWS_AS(kb_from("a\tb\tc\tinf\n"), KbError);
  CHECK_THROWS_AS(KnowledgeBase::load("/nonexistent/kb.tsv"), KbError);
}

TEST_CASE("retrieve_facts examples") {
  auto kb = kb_from(kMicrowave);
  auto top = retrieve_facts(kb, "microwave", 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0] == KnowledgeFact{"microwave", "AtLocation", "kitchen", 6.2});
  CHECK(top[1] == KnowledgeFact{"microwave", "RelatedTo", "oven", 4.1});
  CHECK(top[2] == KnowledgeFact{"microwave", "UsedFor", "heating", 3.3});

  CHECK(retrieve_facts(kb, "microwave", 10).size() == 4);
  CHECK(retrieve_facts(kb, "Microwave").size() == kDefaultFactsPerEntity);
  CHECK(retrieve_facts(kb, "toaster").empty());
  CHECK_THROWS_AS(retrieve_facts(kb, "microwave", 0), std::invalid_argument);
}

TEST_CASE("retrieve_facts tie-break") {
  auto kb = kb_from(
      "sofa\tUsedFor\tsitting\t4.8\n"
      "sofa\tAtLocation\tliving_room\t4.8\n"
      "sofa\tRelatedTo\tcouch\t4.8\n"
      "sofa\tAtLocation\tden\t4.8\n");
  auto facts = retrieve_facts(kb, "sofa", 4);
  std::vector<std::string> order;
  for (const auto &f : facts) order.push_back(f.relation + "/" + f.tail);
  CHECK(order == std::vector<std::string>{"AtLocation/den", "AtLocation/living_room",
                                          "RelatedTo/couch", "UsedFor/sitting"});
}

TEST_CASE("retrieve_facts ordering property") {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> w(0, 4), rel(0, 2), tail(0, 6), kk(1, 8);
  const char *rels[] = {"AtLocation", "RelatedTo", "UsedFor"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string tsv;
    std::vector<KnowledgeFact> all;
    for (int i = 0; i < 7; ++i) {
      KnowledgeFact f{"x", rels[rel(rng)], "t" + std::to_string(tail(rng)),
                      static_cast<double>(w(rng))};
      all.push_back(f);
      tsv += f.head + "\t" + f.relation + "\t" + f.tail + "\t" + std::to_string(f.weight) + "\n";
    }
    const auto k = static_cast<std::size_t>(kk(rng));
    auto got = kb_from(tsv).retrieve("x", k);
    CHECK(got.size() == std::min<std::size_t>(k, all.size()));
    for (std::size_t i = 1; i < got.size(); ++i) {
      CHECK(got[i - 1].weight >= got[i].weight);
      if (got[i - 1].weight == got[i].weight)
        CHECK(std::tie(got[i - 1].relation, got[i - 1].tail) <=
              std::tie(got[i].relation, got[i].tail));
    }
    // Sort oracle over the raw rows.
    std::sort(all.begin(), all.end(), [](const auto &a, const auto &b) {
      return std::make_tuple(-a.weight, a.relation, a.tail) <
             std::make_tuple(-b.weight, b.relation, b.tail);
    });
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == all[i]);
  }
}

TEST_CASE("bundled sample knowledge base") {
  auto kb = KnowledgeBase::load(std::string(NAVEVAL_TEST_DATA_DIR) + "/kb/sample_kb.tsv");
  auto facts = kb.retrieve("microwave");
  REQUIRE(facts.size() == 3);
  CHECK(format_fact(facts[0]) == "microwave\tAtLocation\tkitchen\t6.2");
}
