// tools/naveval.cpp

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

#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "naveval/align.hpp"
#include "naveval/io.hpp"
#include "naveval/knowledge.hpp"
#include "naveval/metric.hpp"
#include "naveval/stats.hpp"
#include "naveval/text.hpp"

namespace {

using namespace naveval;

constexpr int kExitInput = 1;
constexpr int kExitSchema = 2;

struct GlobalOptions {
  std::string taxonomy = "r2r";
  std::string synonyms;
  std::string aggregation = "max";
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double eps = 1e-8;
  std::string out;
  bool quiet = false;
};

void emit(const GlobalOptions &g, const std::string &content) {
  if (g.out.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(g.out, content);
  }
}

std::string join(const std::vector<std::string> &words, const char *sep = " ") {
  std::string s;
  for (const auto &w : words) {
    if (!s.empty()) s += sep;
    s += w;
  }
  return s;
}

struct ScoreArgs {
  std::string candidates;
  std::string references;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

int run_score(const GlobalOptions &g, const ScoreArgs &a) {
  const auto taxonomy = resolve_taxonomy(g.taxonomy);
  const auto synonyms = load_synonyms(g.synonyms);
  const auto aggregation = parse_aggregation(g.aggregation);
  const auto cands = read_records(a.candidates, false);
  const auto refs = read_records(a.references, true);
  const auto report = score_corpus(cands, refs, taxonomy, synonyms, aggregation, a.threads);
  emit(g, to_json(report).dump(2) + "\n");
  if (!g.quiet) {
    std::cerr << "scored " << report.records.size() << " records; mean SPICE "
              << report.mean_spice << ", mean SPICE-D " << report.mean_spice_d;
    if (report.direction_only_records)
      std::cerr << " (" << report.direction_only_records << " direction-only)";
    std::cerr << "\n";
  }
  return 0;
}

int run_align(const GlobalOptions &g, const std::string &features_path) {
  const auto features = parse_features(read_file(features_path));
  AlignOptions opts{g.lambda1, g.lambda2, g.eps};
  const auto report = run_alignment(features, opts);
  emit(g, to_json(report, opts).dump(2) + "\n");
  return 0;
}

struct TextArgs {
  std::string text;
  std::string input;
  std::string verbs;
};

int run_directions(const GlobalOptions &g, const TextArgs &a) {
  const auto taxonomy = resolve_taxonomy(g.taxonomy);
  std::ostringstream out;
  if (!a.input.empty()) {
    for (const auto &rec : read_records(a.input, true)) {
      for (const auto &t : rec.texts)
        out << rec.id << '\t'
            << join(direction_labels(parse_directions(t.instruction, taxonomy)))
            << '\n';
    }
  } else {
    out << join(direction_labels(parse_directions(tokenize(a.text), taxonomy)))
        << '\n';
  }
  emit(g, out.str());
  return 0;
}

int run_chunk(const GlobalOptions &g, const TextArgs &a) {
  const auto verbs = resolve_verb_lexicon(a.verbs);
  const auto instr = tokenize(a.text);
  std::ostringstream out;
  for (const auto &sub : chunk_instruction(instr, verbs))
    out << join_tokens(instr, sub.token_span) << '\n';
  emit(g, out.str());
  return 0;
}

struct CorrelateArgs {
  std::string csv;
  std::string texts;
  std::size_t min_directions = 0;
};

int run_correlate(const GlobalOptions &g, const CorrelateArgs &a) {
  std::istringstream in(read_file(a.csv));
  auto table = parse_score_table(in);
  std::size_t filtered = 0;
  if (!a.texts.empty()) {
    const auto taxonomy = resolve_taxonomy(g.taxonomy);
    std::map<std::string, std::size_t> dir_count;
    for (const auto &rec : read_records(a.texts, false))
      dir_count[rec.id] = parse_directions(rec.texts.front().instruction, taxonomy).size();
    std::vector<bool> keep(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) {
      auto it = dir_count.find(table.ids[r]);
      keep[r] = it != dir_count.end() && it->second >= a.min_directions;
      filtered += keep[r] ? 0 : 1;
    }
    table.keep_rows(keep);
  }
  const auto report = correlate_metrics(table);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto &m : report.metrics) {
    nlohmann::ordered_json row;
    row["metric"] = m.metric;
    row["pearson"] = m.pearson;
    row["n"] = m.n;
    j.push_back(std::move(row));
  }
  emit(g, j.dump(2) + "\n");
  if (!g.quiet) {
    std::cerr << report.complete_rows << " complete rows, " << report.dropped_rows
              << " dropped for missing values";
    if (!a.texts.empty())
      std::cerr << ", " << filtered << " filtered by direction count";
    std::cerr << "\n";
  }
  return 0;
}

struct KbArgs {
  std::string kb;
  std::string entity;
  std::size_t k = kDefaultFactsPerEntity;
};

int run_kb_query(const GlobalOptions &g, const KbArgs &a) {
  const auto kb = KnowledgeBase::load(a.kb);
  std::ostringstream out;
  for (const auto &fact : kb.retrieve(a.entity, a.k)) out << format_fact(fact) << '\n';
  emit(g, out.str());
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"naveval: direction-aware evaluation and temporal alignment "
               "tools for navigation instructions"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--taxonomy", g.taxonomy, "r2r, urban, or a taxonomy JSON file")
      ->capture_default_str();
  app.add_option("--synonyms", g.synonyms, "synonym groups JSON (list of lists)");
  app.add_option("--aggregation", g.aggregation, "multi-reference aggregation")
      ->check(CLI::IsMember({"max", "mean"}))
      ->capture_default_str();
  app.add_option("--lambda1", g.lambda1, "weight of the attention coverage loss")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--lambda2", g.lambda2, "weight of the contrastive loss")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--eps", g.eps, "log clamp in the attention coverage loss")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "write output here instead of stdout");
  app.add_flag("--quiet", g.quiet, "no summary on stderr");

  ScoreArgs score_args;
  auto *score = app.add_subcommand("score", "SPICE / SPICE-D over a JSONL corpus");
  score->fallthrough();
  score->add_option("--candidates", score_args.candidates, "candidate JSONL")
      ->required()->check(CLI::ExistingFile);
  score->add_option("--references", score_args.references, "reference JSONL")
      ->required()->check(CLI::ExistingFile);
  score->add_option("--threads", score_args.threads, "scoring threads")
      ->check(CLI::PositiveNumber);

  std::string features_path;
  auto *align = app.add_subcommand("align", "DTW alignment and alignment losses");
  align->fallthrough();
  align->add_option("--features", features_path, "feature-sequence JSON")
      ->required()->check(CLI::ExistingFile);

  TextArgs dir_args;
  auto *directions = app.add_subcommand("directions", "print parsed direction classes");
  directions->fallthrough();
  auto *dir_text = directions->add_option("--text", dir_args.text, "instruction text");
  auto *dir_input = directions->add_option("--input", dir_args.input, "JSONL records")
                        ->check(CLI::ExistingFile);
  dir_text->excludes(dir_input);
  directions->require_option(1);

  TextArgs chunk_args;
  auto *chunk = app.add_subcommand("chunk", "split an instruction into sub-instructions");
  chunk->fallthrough();
  chunk->add_option("--text", chunk_args.text, "instruction text")->required();
  chunk->add_option("--verbs", chunk_args.verbs, "verb lexicon file")
      ->check(CLI::ExistingFile);

  CorrelateArgs corr_args;
  auto *correlate = app.add_subcommand("correlate", "Pearson correlation of metrics vs human");
  correlate->fallthrough();
  correlate->add_option("--csv", corr_args.csv, "CSV: id, metrics..., human")
      ->required()->check(CLI::ExistingFile);
  auto *texts_opt = correlate->add_option("--texts", corr_args.texts,
                                          "JSONL instructions used for --min-directions")
                        ->check(CLI::ExistingFile);
  correlate->add_option("--min-directions", corr_args.min_directions,
                        "keep rows whose instruction has at least this many "
                        "directional phrases")
      ->needs(texts_opt);

  KbArgs kb_args;
  auto *kb = app.add_subcommand("kb", "knowledge base utilities");
  kb->require_subcommand(1);
  auto *kb_query = kb->add_subcommand("query", "top-K facts for an entity");
  kb_query->fallthrough();
  kb->fallthrough();
  kb_query->add_option("--kb", kb_args.kb, "TSV knowledge base")
      ->required()->check(CLI::ExistingFile);
  kb_query->add_option("--entity", kb_args.entity, "head entity")->required();
  kb_query->add_option("--k", kb_args.k, "number of facts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*score) return run_score(g, score_args);
    if (*align) return run_align(g, features_path);
    if (*directions) return run_directions(g, dir_args);
    if (*chunk) return run_chunk(g, chunk_args);
    if (*correlate) return run_correlate(g, corr_args);
    if (*kb_query) return run_kb_query(g, kb_args);
  } catch (const SchemaError &e) {
    std::cerr << "naveval: schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const TaxonomyError &e) {
    std::cerr << "naveval: schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const KbError &e) {
    std::cerr << "naveval: " << e.what() << "\n";
    return e.line() ? kExitSchema : kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "naveval: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
