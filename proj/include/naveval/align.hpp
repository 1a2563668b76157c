// naveval/align.hpp

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

// Temporal alignment between sub-instructions and trajectory viewpoints.
//
// Hidden-state sequences are dense matrices with one vector per row:
// sub-instruction means are M x D, panorama states N x D, decoder word
// states N_w x D. The DTW alignment A is M x N, the word-level target A'
// is N_w x N and attention weights beta are N_w x N.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "naveval/text.hpp"

namespace naveval {

class AlignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary indicator matrices are stored as int.
using AlignmentMatrix = Eigen::MatrixXi;

/// Throws AlignError unless `seq` is nonempty and every entry is finite.
template <typename Derived>
void check_hidden_sequence(const Eigen::MatrixBase<Derived> &seq,
                           const std::string &role) {
  if (seq.rows() == 0 || seq.cols() == 0)
    throw AlignError(role + " sequence is empty");
  if (!seq.allFinite())
    throw AlignError(role + " sequence has non-finite entries");
}

/// cost(m, t) = 1 - cos(subs.row(m), panos.row(t)), entries in [0, 2].
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> build_cost(const Eigen::MatrixBase<DerivedA> &subs,
                                             const Eigen::MatrixBase<DerivedB> &panos) {
  using Scalar = typename DerivedA::Scalar;
  check_hidden_sequence(subs, "sub_instruction");
  check_hidden_sequence(panos, "panorama");
  if (subs.cols() != panos.cols())
    throw AlignError("dimension mismatch: sub_instruction vectors have " +
                     std::to_string(subs.cols()) + " entries, panorama vectors " +
                     std::to_string(panos.cols()));

  auto normalized = [](const auto &seq, const std::string &role) {
    Matrix<Scalar> out = seq;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      Scalar norm = out.row(i).norm();
      if (norm == Scalar(0))
        throw AlignError("zero-norm " + role + " vector at index " +
                         std::to_string(i));
      out.row(i) /= norm;
    }
    return out;
  };
  Matrix<Scalar> cosine = normalized(subs, "sub_instruction") *
                          normalized(panos, "panorama").transpose();
  // Rounding can push |cos| slightly past 1.
  return (Scalar(1) - cosine.array().max(Scalar(-1)).min(Scalar(1))).matrix();
}

template <typename Scalar>
struct DtwResult {
  AlignmentMatrix alignment;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> path;  // (m, t), 0-based
  Scalar cost = 0;
};

/// Minimum-cost monotone path from (0, 0) to (M-1, N-1) with steps
/// (0,1), (1,0) and (1,1). Backtracking prefers the diagonal predecessor,
/// then the one in the previous row, then the one in the previous column.
template <typename Derived>
DtwResult<typename Derived::Scalar> dtw_path(const Eigen::MatrixBase<Derived> &cost) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index rows = cost.rows(), cols = cost.cols();
  if (rows < 1 || cols < 1) throw AlignError("cost matrix must be at least 1x1");
  if (!cost.allFinite()) throw AlignError("cost matrix has non-finite entries");

  Matrix<Scalar> acc(rows, cols);
  for (Eigen::Index m = 0; m < rows; ++m) {
    for (Eigen::Index t = 0; t < cols; ++t) {
      Scalar best;
      if (m == 0 && t == 0) best = 0;
      else if (m == 0) best = acc(m, t - 1);
      else if (t == 0) best = acc(m - 1, t);
      else best = std::min({acc(m - 1, t - 1), acc(m - 1, t), acc(m, t - 1)});
      acc(m, t) = cost(m, t) + best;
    }
  }

  DtwResult<Scalar> out;
  out.cost = acc(rows - 1, cols - 1);
  out.alignment = AlignmentMatrix::Zero(rows, cols);
  Eigen::Index m = rows - 1, t = cols - 1;
  while (true) {
    out.path.emplace_back(m, t);
    out.alignment(m, t) = 1;
    if (m == 0 && t == 0) break;
    if (m == 0) { --t; continue; }
    if (t == 0) { --m; continue; }
    const Scalar diag = acc(m - 1, t - 1), up = acc(m - 1, t), left = acc(m, t - 1);
    if (diag <= up && diag <= left) { --m; --t; }
    else if (up <= left) { --m; }
    else { --t; }
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

template <typename Derived>
AlignmentMatrix dtw_align(const Eigen::MatrixBase<Derived> &cost) {
  return dtw_path(cost).alignment;
}

/// Checks the staircase invariants of a DTW alignment: both corners set,
/// the ones form one monotone path of unit steps, every row and column hit.
bool is_valid_alignment(const AlignmentMatrix &a);

struct TargetMatrix {
  AlignmentMatrix a_prime;              // N_w x N
  std::vector<std::size_t> word_to_sub;  // 0-based sub-instruction per word
};

/// Row o of A' is row word_to_sub[o] of A.
TargetMatrix expand_alignment(const AlignmentMatrix &a,
                              std::vector<std::size_t> word_to_sub);

/// Same, with the word mapping derived from chunk spans over n_words tokens.
TargetMatrix expand_alignment(const AlignmentMatrix &a,
                              const std::vector<SubInstruction> &subs,
                              std::size_t n_words);

/// Throws unless beta is in [0, 1] and every row sums to 1 within 1e-6.
template <typename Derived>
void check_attention(const Eigen::MatrixBase<Derived> &beta) {
  using Scalar = typename Derived::Scalar;
  if (!beta.allFinite()) throw AlignError("attention has non-finite entries");
  if ((beta.array() < Scalar(0)).any() || (beta.array() > Scalar(1)).any())
    throw AlignError("attention entries must lie in [0, 1]");
  for (Eigen::Index o = 0; o < beta.rows(); ++o) {
    if (std::abs(beta.row(o).sum() - Scalar(1)) > Scalar(1e-6))
      throw AlignError("attention row " + std::to_string(o) +
                       " does not sum to 1");
  }
}

/// Attention coverage loss:
///   -1/N_w sum_o [ log max(sum_t A'_ot b_ot, eps)
///                + log max(sum_t (1 - A'_ot)(1 - b_ot), eps) ]
template <typename Derived>
typename Derived::Scalar attention_coverage_loss(const Eigen::MatrixBase<Derived> &beta,
                                                 const AlignmentMatrix &a_prime,
                                                 typename Derived::Scalar eps = 1e-8) {
  using Scalar = typename Derived::Scalar;
  if (beta.rows() != a_prime.rows() || beta.cols() != a_prime.cols())
    throw AlignError("shape mismatch: attention is " + std::to_string(beta.rows()) +
                     "x" + std::to_string(beta.cols()) + ", target is " +
                     std::to_string(a_prime.rows()) + "x" +
                     std::to_string(a_prime.cols()));
  if (!(eps > Scalar(0))) throw AlignError("eps must be positive");
  if (beta.rows() == 0) throw AlignError("attention has no rows");
  check_attention(beta);

  const auto target = a_prime.template cast<Scalar>().array();
  const auto b = beta.array();
  Scalar total = 0;
  for (Eigen::Index o = 0; o < beta.rows(); ++o) {
    Scalar aligned = (target.row(o) * b.row(o)).sum();
    Scalar unaligned = ((Scalar(1) - target.row(o)) * (Scalar(1) - b.row(o))).sum();
    total += std::log(std::max(aligned, eps)) + std::log(std::max(unaligned, eps));
  }
  return -total / static_cast<Scalar>(beta.rows());
}

/// Contrastive loss over word/panorama dot-product logits:
///   -1/N_w sum_o log( sum_t A'_ot exp(l_ot) / sum_t exp(l_ot) ),
/// l = words * panos^T, evaluated with the row max subtracted.
template <typename Derived>
typename Derived::Scalar contrastive_loss_from_logits(const Eigen::MatrixBase<Derived> &logits,
                                                      const AlignmentMatrix &a_prime) {
  using Scalar = typename Derived::Scalar;
  if (logits.rows() != a_prime.rows() || logits.cols() != a_prime.cols())
    throw AlignError("shape mismatch between logits and target matrix");
  if (logits.rows() == 0) throw AlignError("no words");
  if (!logits.allFinite()) throw AlignError("logits have non-finite entries");

  Scalar total = 0;
  for (Eigen::Index o = 0; o < logits.rows(); ++o) {
    if ((a_prime.row(o).array() == 0).all())
      throw AlignError("target row " + std::to_string(o) +
                       " has no aligned viewpoint");
    const Scalar shift = logits.row(o).maxCoeff();
    Scalar pos = 0, all = 0;
    for (Eigen::Index t = 0; t < logits.cols(); ++t) {
      Scalar e = std::exp(logits(o, t) - shift);
      all += e;
      if (a_prime(o, t) != 0) pos += e;
    }
    total += std::log(pos) - std::log(all);
  }
  return -total / static_cast<Scalar>(logits.rows());
}

template <typename DerivedP, typename DerivedW>
typename DerivedP::Scalar contrastive_loss(const Eigen::MatrixBase<DerivedP> &panos,
                                           const Eigen::MatrixBase<DerivedW> &words,
                                           const AlignmentMatrix &a_prime) {
  check_hidden_sequence(panos, "panorama");
  check_hidden_sequence(words, "word");
  if (panos.cols() != words.cols())
    throw AlignError("dimension mismatch between panorama and word vectors");
  if (panos.rows() != a_prime.cols())
    throw AlignError("panorama count " + std::to_string(panos.rows()) +
                     " does not match target columns " +
                     std::to_string(a_prime.cols()));
  if (words.rows() != a_prime.rows())
    throw AlignError("word count " + std::to_string(words.rows()) +
                     " does not match target rows " +
                     std::to_string(a_prime.rows()));
  return contrastive_loss_from_logits(words * panos.transpose(), a_prime);
}

/// Row-wise softmax of word/panorama dot products; stands in for decoder
/// attention when none is supplied.
template <typename DerivedP, typename DerivedW>
Matrix<typename DerivedP::Scalar> dot_product_attention(
    const Eigen::MatrixBase<DerivedP> &panos, const Eigen::MatrixBase<DerivedW> &words) {
  using Scalar = typename DerivedP::Scalar;
  if (panos.cols() != words.cols())
    throw AlignError("dimension mismatch between panorama and word vectors");
  Matrix<Scalar> logits = words * panos.transpose();
  for (Eigen::Index o = 0; o < logits.rows(); ++o) {
    logits.row(o).array() = (logits.row(o).array() - logits.row(o).maxCoeff()).exp();
    logits.row(o) /= logits.row(o).sum();
  }
  return logits;
}

/// ce + lambda1 * l_att + lambda2 * l_nce.
template <typename Scalar>
Scalar total_loss(Scalar ce, Scalar l_att, Scalar l_nce, Scalar lambda1 = 1,
                  Scalar lambda2 = 1) {
  if (!std::isfinite(ce) || !std::isfinite(l_att) || !std::isfinite(l_nce) ||
      !std::isfinite(lambda1) || !std::isfinite(lambda2))
    throw AlignError("loss terms and weights must be finite");
  if (lambda1 < 0 || lambda2 < 0)
    throw AlignError("balancing factors must be non-negative");
  return ce + lambda1 * l_att + lambda2 * l_nce;
}

}  // namespace naveval
