// tests/acceptance.cpp

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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail. Unit test binaries named on the command line are
// executed for the suite timing in criterion 9.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "naveval/align.hpp"
#include "naveval/io.hpp"
#include "naveval/knowledge.hpp"
#include "naveval/metric.hpp"
#include "naveval/stats.hpp"
#include "oracles.hpp"

using namespace naveval;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

namespace {

const std::string kData = NAVEVAL_TEST_DATA_DIR;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string &what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

int shell(const std::string &cmd, std::string *out = nullptr) {
  FILE *p = ::popen(cmd.c_str(), "r");
  if (!p) return -1;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0)
    if (out) out->append(buf, n);
  const int raw = ::pclose(p);
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

SemanticTupleSet random_tuples(std::mt19937 &rng) {
  static const std::vector<std::string> words = {"sofa", "door", "kitchen", "walk",
                                                 "stairs", "table", "past", "red"};
  std::uniform_int_distribution<int> count(0, 6), arity(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  SemanticTupleSet out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> e(arity(rng));
    for (auto &w : e) w = words[pick(rng)];
    out.emplace(e);
  }
  return out;
}

Check c1_worked_example(double &elapsed) {
  Check c;
  // Four shared tuples, one extra on the candidate side, two on the reference.
  SemanticTupleSet cand, ref;
  for (const char *w : {"a", "b", "c", "d"}) {
    cand.emplace(std::vector<std::string>{w});
    ref.emplace(std::vector<std::string>{w});
  }
  cand.emplace(std::vector<std::string>{"x"});
  ref.emplace(std::vector<std::string>{"y"});
  ref.emplace(std::vector<std::string>{"z"});
  const DirectionSequence dirs = {"right", "left"};

  const auto t0 = Clock::now();
  const auto r = spice_d_score(cand, ref, dirs, dirs);
  elapsed = seconds_since(t0);

  c.expect(std::abs(r.pr_sd - 6.0 / 7.0) <= 1e-12, "Pr_SD = " + fmt(r.pr_sd));
  c.expect(std::abs(r.re_sd - 0.75) <= 1e-12, "Re_SD = " + fmt(r.re_sd));
  c.expect(std::abs(r.spice_d - 0.8) <= 1e-12, "SPICE-D = " + fmt(r.spice_d));
  c.expect(elapsed < 1e-3, "took " + fmt(elapsed) + " s");
  return c;
}

Check c2_degeneracy() {
  Check c;
  std::mt19937 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_tuples(rng), b = random_tuples(rng);
    const auto r = spice_d_score(a, b, {}, {});
    const auto s = spice_score(a, b);
    c.expect(std::abs(r.spice_d - s.f) <= 1e-12 && std::abs(r.spice - s.f) <= 1e-12,
             "pair " + std::to_string(i) + ": " + fmt(r.spice_d) + " vs " + fmt(s.f));
  }
  return c;
}

Check c3_order_sensitivity() {
  Check c;
  const SemanticTupleSet tuples = {SemanticTuple({"sofa"}), SemanticTuple({"door"}),
                                   SemanticTuple({"walk", "past", "sofa"})};
  const DirectionSequence cand = {"left", "right"}, same = {"left", "right"},
                          swapped = {"right", "left"};
  const auto good = spice_d_score(tuples, tuples, cand, same);
  const auto bad = spice_d_score(tuples, tuples, cand, swapped);
  c.expect(good.counts.lcs == 2, "lcs vs same order = " + std::to_string(good.counts.lcs));
  c.expect(bad.counts.lcs == 1, "lcs vs swapped = " + std::to_string(bad.counts.lcs));
  c.expect(good.spice_d > bad.spice_d, fmt(good.spice_d) + " <= " + fmt(bad.spice_d));
  return c;
}

Check c4_lcs_oracle(double &elapsed) {
  Check c;
  std::mt19937 rng(404);
  const std::vector<std::string> alphabet = {"right", "left", "around"};
  const auto t0 = Clock::now();
  for (int i = 0; i < 500; ++i) {
    const auto a = oracle::random_labels(rng, 8, alphabet);
    const auto b = oracle::random_labels(rng, 8, alphabet);
    const auto got = lcs_length(a, b), want = oracle::lcs_by_enumeration(a, b);
    c.expect(got == want, "pair " + std::to_string(i) + ": " + std::to_string(got) +
                              " vs " + std::to_string(want));
  }
  elapsed = seconds_since(t0);
  c.expect(elapsed < 5.0, "took " + fmt(elapsed) + " s");
  return c;
}

Check c5_dtw_oracle(double &elapsed) {
  Check c;
  std::mt19937 rng(505);
  std::uniform_int_distribution<int> rows(1, 6), cols(1, 8);
  std::uniform_real_distribution<double> val(0.0, 2.0);
  const auto t0 = Clock::now();
  for (int i = 0; i < 200; ++i) {
    const int m = rows(rng), n = cols(rng);
    Eigen::MatrixXd cost(m, n);
    oracle::Grid grid(m, std::vector<double>(n));
    for (int r = 0; r < m; ++r)
      for (int t = 0; t < n; ++t) grid[r][t] = cost(r, t) = val(rng);
    const auto res = dtw_path(cost);
    const double want = oracle::min_path_cost(grid);
    c.expect(std::abs(res.cost - want) <= 1e-9,
             "matrix " + std::to_string(i) + ": " + fmt(res.cost) + " vs " + fmt(want));
    c.expect(is_valid_alignment(res.alignment),
             "matrix " + std::to_string(i) + ": invalid staircase");
    double along = 0;
    for (auto [r, t] : res.path) along += grid[r][t];
    c.expect(std::abs(along - res.cost) <= 1e-9,
             "matrix " + std::to_string(i) + ": path does not realise its cost");
  }
  elapsed = seconds_since(t0);
  c.expect(elapsed < 10.0, "took " + fmt(elapsed) + " s");
  return c;
}

Check c6_losses() {
  Check c;
  AlignmentMatrix one_zero(1, 2);
  one_zero << 1, 0;
  Eigen::MatrixXd beta(1, 2);
  beta << 1, 0;
  c.expect(attention_coverage_loss(beta, one_zero) == 0.0, "L_att trivial case");

  beta << 0.5, 0.5;
  const double half = attention_coverage_loss(beta, one_zero);
  c.expect(std::abs(half - 2 * std::log(2.0)) <= 1e-9, "L_att = " + fmt(half));

  AlignmentMatrix all_ones = AlignmentMatrix::Ones(1, 4);
  Eigen::MatrixXd logits(1, 4);
  logits << 0.3, -1.2, 2.5, 0.0;
  c.expect(contrastive_loss_from_logits(logits, all_ones) == 0.0, "L_nce trivial case");

  AlignmentMatrix first(1, 4);
  first << 1, 0, 0, 0;
  logits.setConstant(0.7);
  const double ln4 = contrastive_loss_from_logits(logits, first);
  c.expect(std::abs(ln4 - std::log(4.0)) <= 1e-9, "L_nce = " + fmt(ln4));

  std::mt19937 rng(606);
  std::uniform_int_distribution<int> dim(1, 6);
  std::normal_distribution<double> g(0, 3);
  std::bernoulli_distribution coin(0.4);
  for (int i = 0; i < 100; ++i) {
    const int w = dim(rng), n = dim(rng);
    Eigen::MatrixXd l(w, n), shifted(w, n);
    AlignmentMatrix ap = AlignmentMatrix::Zero(w, n);
    for (int o = 0; o < w; ++o) {
      const double k = g(rng) * 10;
      for (int t = 0; t < n; ++t) {
        l(o, t) = g(rng);
        shifted(o, t) = l(o, t) + k;
        ap(o, t) = coin(rng) ? 1 : 0;
      }
      ap(o, std::uniform_int_distribution<int>(0, n - 1)(rng)) = 1;
    }
    const double a = contrastive_loss_from_logits(l, ap);
    const double b = contrastive_loss_from_logits(shifted, ap);
    c.expect(std::abs(a - b) <= 1e-9, "instance " + std::to_string(i) + ": " + fmt(a) +
                                          " vs " + fmt(b));
  }
  return c;
}

Check c7_pearson() {
  Check c;
  const std::vector<double> x = {1, 2, 3, 4}, y = {1, 3, 2, 4};
  const double r = pearson(x, y);
  c.expect(std::abs(r - 0.8) <= 1e-12, "r = " + fmt(r));

  std::mt19937 rng(707);
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> scale(0.1, 10), offset(-50, 50);
  std::uniform_int_distribution<int> len(3, 50);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(len(rng)), b(a.size()), a2(a.size());
    const double s = scale(rng), o = offset(rng);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = g(rng);
      b[k] = a[k] * 0.3 + g(rng);
      a2[k] = s * a[k] + o;
    }
    const double base = pearson(a, b), moved = pearson(a2, b);
    c.expect(std::abs(base - moved) <= 1e-12,
             "series " + std::to_string(i) + ": " + fmt(base) + " vs " + fmt(moved));
    c.expect(std::abs(base - oracle::pearson_direct(a, b)) <= 1e-12,
             "series " + std::to_string(i) + ": disagrees with the direct formula");
  }
  return c;
}

Check c8_knowledge() {
  Check c;
  const auto kb = KnowledgeBase::load(kData + "/kb/sample_kb.tsv");
  c.expect(kDefaultFactsPerEntity == 3, "default K is " + std::to_string(kDefaultFactsPerEntity));
  for (const char *entity : {"microwave", "fridge", "sofa", "bed", "sink", "toilet"}) {
    const auto facts = kb.retrieve(entity);
    const auto *all = kb.facts_for(entity);
    c.expect(all != nullptr, std::string("no facts for ") + entity);
    if (!all) continue;
    c.expect(facts.size() == std::min<std::size_t>(3, all->size()),
             std::string("wrong count for ") + entity);
    for (std::size_t i = 1; i < facts.size(); ++i) {
      c.expect(facts[i - 1].weight >= facts[i].weight,
               std::string("weight increases for ") + entity);
      if (facts[i - 1].weight == facts[i].weight)
        c.expect(std::tie(facts[i - 1].relation, facts[i - 1].tail) <
                     std::tie(facts[i].relation, facts[i].tail),
                 std::string("tie order for ") + entity);
    }
    c.expect(kb.retrieve(entity) == facts, std::string("unstable order for ") + entity);
  }
  const auto sofa = kb.retrieve("sofa");
  c.expect(sofa.size() == 3 && sofa[0].relation == "AtLocation",
           "sofa tie-break did not put AtLocation first");
  return c;
}

Check c9_end_to_end(const std::vector<std::string> &unit_tests, double started,
                    double &suite_seconds) {
  Check c;
  const std::string cli = std::string("'") + NAVEVAL_CLI_PATH + "'";
  const auto tmp = fs::temp_directory_path() / ("naveval_accept_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const std::string common = " --quiet --synonyms '" + kData + "/synonyms.json' score --candidates '" +
                             kData + "/mini/candidates.jsonl' --references '" + kData +
                             "/mini/references.jsonl'";
  std::string first, second;
  c.expect(shell(cli + common + " --threads 1 --out '" + (tmp / "a.json").string() + "'") == 0,
           "score run 1 failed");
  c.expect(shell(cli + common + " --threads 8 --out '" + (tmp / "b.json").string() + "'") == 0,
           "score run 2 failed");
  try {
    first = read_file(tmp / "a.json");
    second = read_file(tmp / "b.json");
    const auto golden = read_file(kData + "/mini/golden_report.json");
    c.expect(first == second, "runs differ");
    c.expect(first == golden, "output differs from the golden report");
  } catch (const std::exception &e) {
    c.expect(false, e.what());
  }

  std::string self;
  const auto cands = kData + "/mini/candidates.jsonl";
  c.expect(shell(cli + " --quiet score --candidates '" + cands + "' --references '" + cands +
                 "'", &self) == 0,
           "self-scoring run failed");
  try {
    const auto j = nlohmann::json::parse(self);
    const double mean = j["corpus"]["mean_spice_d"].get<double>();
    c.expect(std::abs(mean - 1.0) <= 1e-12, "self-score mean SPICE-D = " + fmt(mean));
  } catch (const std::exception &e) {
    c.expect(false, std::string("self-score output: ") + e.what());
  }
  fs::remove_all(tmp);

  const auto t0 = Clock::now();
  for (const auto &bin : unit_tests) {
    const int rc = shell("'" + bin + "' > /dev/null 2>&1");
    c.expect(rc == 0, fs::path(bin).filename().string() + " failed");
  }
  suite_seconds = started + seconds_since(t0);
  c.expect(suite_seconds < 60.0, "suite took " + fmt(suite_seconds) + " s");
  return c;
}

}  // namespace

int main(int argc, char **argv) {
  const auto start = Clock::now();
  std::vector<std::string> unit_tests(argv + 1, argv + argc);
  int failures = 0;
  auto report = [&](int n, const std::string &name, const Check &c, const std::string &extra) {
    std::cout << (c.ok ? "PASS" : "FAIL") << "  " << n << "  " << name;
    if (!extra.empty()) std::cout << "  (" << extra << ")";
    if (!c.ok) std::cout << "  -- " << c.why;
    std::cout << "\n";
    failures += c.ok ? 0 : 1;
  };

  auto guarded = [](const std::function<Check()> &f) {
    try {
      return f();
    } catch (const std::exception &e) {
      Check c;
      c.expect(false, std::string("exception: ") + e.what());
      return c;
    }
  };

  double t1 = 0, t4 = 0, t5 = 0, suite = 0;
  Check c;
  c = guarded([&] { return c1_worked_example(t1); });
  report(1, "SPICE-D worked example", c, fmt(t1 * 1e3) + " ms");
  c = guarded(c2_degeneracy);
  report(2, "SPICE-D reduces to SPICE without directions", c, "");
  c = guarded(c3_order_sensitivity);
  report(3, "direction order sensitivity", c, "");
  c = guarded([&] { return c4_lcs_oracle(t4); });
  report(4, "LCS against exhaustive enumeration", c, fmt(t4) + " s");
  c = guarded([&] { return c5_dtw_oracle(t5); });
  report(5, "DTW against exhaustive path enumeration", c, fmt(t5) + " s");
  c = guarded(c6_losses);
  report(6, "alignment losses", c, "");
  c = guarded(c7_pearson);
  report(7, "Pearson correlation", c, "");
  c = guarded(c8_knowledge);
  report(8, "knowledge retrieval ordering", c, "");
  const double so_far = seconds_since(start);
  c = guarded([&] { return c9_end_to_end(unit_tests, so_far, suite); });
  report(9, "end-to-end scoring and suite time", c, fmt(suite) + " s");
  return failures ? 1 : 0;
}
