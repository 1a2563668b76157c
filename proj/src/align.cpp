// align.cpp

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

#include "naveval/align.hpp"

namespace naveval {

bool is_valid_alignment(const AlignmentMatrix &a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  if (rows < 1 || cols < 1) return false;
  if (((a.array() != 0) && (a.array() != 1)).any()) return false;
  if (a(0, 0) != 1 || a(rows - 1, cols - 1) != 1) return false;
  for (Eigen::Index m = 0; m < rows; ++m)
    if (a.row(m).sum() == 0) return false;
  for (Eigen::Index t = 0; t < cols; ++t)
    if (a.col(t).sum() == 0) return false;

  // Walk the staircase from the top-left corner; every one must be visited.
  Eigen::Index m = 0, t = 0, visited = 1;
  while (m != rows - 1 || t != cols - 1) {
    const bool right = t + 1 < cols && a(m, t + 1);
    const bool down = m + 1 < rows && a(m + 1, t);
    const bool diag = m + 1 < rows && t + 1 < cols && a(m + 1, t + 1);
    if (right + down + diag != 1) return false;
    if (diag) { ++m; ++t; }
    else if (down) { ++m; }
    else { ++t; }
    ++visited;
  }
  return visited == a.sum();
}

TargetMatrix expand_alignment(const AlignmentMatrix &a,
                              std::vector<std::size_t> word_to_sub) {
  TargetMatrix out;
  out.a_prime.resize(static_cast<Eigen::Index>(word_to_sub.size()), a.cols());
  for (std::size_t o = 0; o < word_to_sub.size(); ++o) {
    if (word_to_sub[o] >= static_cast<std::size_t>(a.rows()))
      throw AlignError("word " + std::to_string(o) + " maps to sub-instruction " +
                       std::to_string(word_to_sub[o]) + " but A has only " +
                       std::to_string(a.rows()) + " rows");
    out.a_prime.row(static_cast<Eigen::Index>(o)) =
        a.row(static_cast<Eigen::Index>(word_to_sub[o]));
  }
  out.word_to_sub = std::move(word_to_sub);
  return out;
}

TargetMatrix expand_alignment(const AlignmentMatrix &a,
                              const std::vector<SubInstruction> &subs,
                              std::size_t n_words) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> word_to_sub(n_words, kUnset);
  for (std::size_t m = 0; m < subs.size(); ++m) {
    const Span s = subs[m].token_span;
    for (std::size_t o = s.begin; o < s.end; ++o) {
      if (o >= n_words)
        throw AlignError("sub-instruction " + std::to_string(m + 1) +
                         " extends past word " + std::to_string(n_words));
      if (word_to_sub[o] != kUnset)
        throw AlignError("word " + std::to_string(o) +
                         " is covered by two sub-instructions");
      word_to_sub[o] = m;
    }
  }
  for (std::size_t o = 0; o < n_words; ++o)
    if (word_to_sub[o] == kUnset)
      throw AlignError("word " + std::to_string(o) +
                       " is not covered by any sub-instruction");
  return expand_alignment(a, std::move(word_to_sub));
}

}  // namespace naveval
