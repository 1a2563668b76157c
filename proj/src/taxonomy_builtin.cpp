// taxonomy_builtin.cpp

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

// Default synonym lists. Only "turn right", "make a right" and "veer right"
// come from the original description of the metric; the rest are our own
// defaults and can be replaced with a taxonomy file.

#include "naveval/text.hpp"

namespace naveval {

namespace {

std::vector<std::string> side_phrases(const std::string &side) {
  return {
      "turn " + side,         "make a " + side,         "veer " + side,
      side,                   "go " + side,             "take a " + side,
      "bear " + side,         "hang a " + side,         side + " turn",
      "turn to the " + side,  "turn to your " + side,   "slight " + side,
      "hard " + side,         "sharp " + side,          "head " + side,
  };
}

DirectionTaxonomy make_r2r() {
  return DirectionTaxonomy(
      "r2r", {{"right", side_phrases("right")},
              {"left", side_phrases("left")},
              {"around",
               {"turn around", "turn back", "turn yourself around",
                "spin around", "u-turn", "make a u-turn", "do a u-turn",
                "about face", "reverse direction", "turn 180 degrees"}}});
}

DirectionTaxonomy make_urban() {
  std::vector<DirectionClass> classes = {{"right", side_phrases("right")},
                                         {"left", side_phrases("left")}};
  const std::pair<const char *, const char *> hours[] = {
      {"nine", "9"},   {"ten", "10"}, {"eleven", "11"}, {"twelve", "12"},
      {"one", "1"},    {"two", "2"},  {"three", "3"},
  };
  for (const auto &[word, digit] : hours) {
    std::string w = word, d = digit;
    classes.push_back({w + "_oclock",
                       {w + " o'clock", d + " o'clock", w + " oclock",
                        d + " oclock", d + "o'clock", d + "oclock"}});
  }
  return DirectionTaxonomy("urban", std::move(classes));
}

}  // namespace

DirectionTaxonomy builtin_taxonomy(std::string_view name) {
  if (name == "r2r") return make_r2r();
  if (name == "urban") return make_urban();
  throw TaxonomyError("unknown builtin taxonomy '" + std::string(name) + "'");
}

std::vector<std::string> builtin_taxonomy_names() { return {"r2r", "urban"}; }

}  // namespace naveval
