// io.cpp

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

#include "naveval/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#ifndef NAVEVAL_DEFAULT_DATA_DIR
#define NAVEVAL_DEFAULT_DATA_DIR "data"
#endif

namespace naveval {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path &path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InputError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot move output into place at '" + path.string() + "'");
  }
}

fs::path data_dir() {
  if (const char *env = std::getenv("NAVEVAL_DATA_DIR"); env && *env) return env;
  return NAVEVAL_DEFAULT_DATA_DIR;
}

DirectionTaxonomy resolve_taxonomy(const std::string &name_or_path) {
  const auto builtins = builtin_taxonomy_names();
  const bool is_builtin =
      std::find(builtins.begin(), builtins.end(), name_or_path) != builtins.end();
  if (is_builtin) {
    fs::path bundled = data_dir() / "taxonomies" / (name_or_path + ".json");
    if (fs::exists(bundled)) return DirectionTaxonomy::from_json(read_file(bundled));
    return builtin_taxonomy(name_or_path);
  }
  if (!fs::exists(name_or_path))
    throw InputError("taxonomy '" + name_or_path +
                     "' is neither a bundled name (r2r, urban) nor a readable file");
  return DirectionTaxonomy::from_json(read_file(name_or_path));
}

VerbLexicon resolve_verb_lexicon(const std::string &path) {
  if (!path.empty()) return parse_verb_lexicon(read_file(path));
  fs::path bundled = data_dir() / "verbs.txt";
  if (fs::exists(bundled)) return parse_verb_lexicon(read_file(bundled));
  return default_verb_lexicon();
}

SynonymGroups load_synonyms(const std::string &path) {
  if (path.empty()) return {};
  return SynonymGroups::from_json(read_file(path));
}

namespace {

[[noreturn]] void schema_fail(const std::string &source, std::size_t line,
                              const std::string &what) {
  throw SchemaError(source + ":" + std::to_string(line) + ": " + what);
}

ScoredText parse_text(const json &obj, const std::string &source, std::size_t line) {
  ScoredText out;
  if (!obj.contains("text") || !obj["text"].is_string())
    schema_fail(source, line, "missing string field \"text\"");
  const auto text = obj["text"].get<std::string>();
  if (text.empty()) schema_fail(source, line, "\"text\" is empty");
  out.instruction = tokenize(text);

  if (obj.contains("tuples") && !obj["tuples"].is_null()) {
    if (!obj["tuples"].is_array()) schema_fail(source, line, "\"tuples\" must be a list");
    SemanticTupleSet tuples;
    for (const auto &t : obj["tuples"]) {
      if (!t.is_array()) schema_fail(source, line, "each tuple must be a list of strings");
      std::vector<std::string> elems;
      for (const auto &e : t) {
        if (!e.is_string()) schema_fail(source, line, "tuple elements must be strings");
        elems.push_back(e.get<std::string>());
      }
      try {
        tuples.emplace(std::move(elems));
      } catch (const MetricError &e) {
        schema_fail(source, line, e.what());
      }
    }
    out.tuples = std::move(tuples);
  }
  if (obj.contains("directions") && !obj["directions"].is_null()) {
    if (!obj["directions"].is_array())
      schema_fail(source, line, "\"directions\" must be a list of labels");
    DirectionSequence dirs;
    for (const auto &d : obj["directions"]) {
      if (!d.is_string()) schema_fail(source, line, "direction labels must be strings");
      dirs.push_back(d.get<std::string>());
    }
    out.directions = std::move(dirs);
  }
  return out;
}

}  // namespace

std::vector<EvalRecord> parse_records(std::istream &in, bool allow_multi,
                                      const std::string &source) {
  std::vector<EvalRecord> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      schema_fail(source, lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) schema_fail(source, lineno, "record must be a JSON object");
    if (!obj.contains("id") || !obj["id"].is_string() ||
        obj["id"].get<std::string>().empty())
      schema_fail(source, lineno, "missing nonempty string field \"id\"");

    EvalRecord rec;
    rec.id = obj["id"].get<std::string>();
    if (!seen.insert(rec.id).second)
      schema_fail(source, lineno, "duplicate id '" + rec.id + "'");

    if (allow_multi && obj.contains("references")) {
      if (!obj["references"].is_array() || obj["references"].empty())
        schema_fail(source, lineno, "\"references\" must be a nonempty list");
      for (const auto &r : obj["references"]) {
        if (!r.is_object()) schema_fail(source, lineno, "each reference must be an object");
        rec.texts.push_back(parse_text(r, source, lineno));
      }
    } else {
      rec.texts.push_back(parse_text(obj, source, lineno));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<EvalRecord> read_records(const std::string &path, bool allow_multi) {
  std::istringstream in(read_file(path));
  return parse_records(in, allow_multi, path);
}

CorpusReport score_corpus(const std::vector<EvalRecord> &candidates,
                          const std::vector<EvalRecord> &references,
                          const DirectionTaxonomy &taxonomy,
                          const SynonymGroups &synonyms, Aggregation aggregation,
                          unsigned threads) {
  std::map<std::string, const EvalRecord *> by_id;
  for (const auto &r : references) by_id.emplace(r.id, &r);

  std::vector<std::string> missing;
  std::vector<const EvalRecord *> matched;
  matched.reserve(candidates.size());
  for (const auto &c : candidates) {
    auto it = by_id.find(c.id);
    if (it == by_id.end()) missing.push_back(c.id);
    matched.push_back(it == by_id.end() ? nullptr : it->second);
  }
  if (!missing.empty()) {
    std::string ids;
    for (const auto &id : missing) ids += (ids.empty() ? "" : ", ") + id;
    throw InputError("no reference for candidate id(s): " + ids);
  }

  CorpusReport report;
  report.taxonomy = taxonomy.name();
  report.aggregation = aggregation;
  report.records.resize(candidates.size());

  // Each worker owns a strided slice of the output slots.
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(candidates.size())));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < candidates.size(); i += workers) {
        report.records[i].id = candidates[i].id;
        report.records[i].report =
            score_pair(candidates[i].texts.front(), matched[i]->texts, taxonomy,
                       synonyms, aggregation);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto &e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto &r : report.records) {
    report.mean_spice += r.report.spice;
    report.mean_spice_d += r.report.spice_d;
    report.direction_only_records += r.report.direction_only ? 1 : 0;
  }
  if (!report.records.empty()) {
    report.mean_spice /= static_cast<double>(report.records.size());
    report.mean_spice_d /= static_cast<double>(report.records.size());
  }
  std::set<std::string> used;
  for (const auto &c : candidates) used.insert(c.id);
  for (const auto &r : references) report.unused_references += used.count(r.id) ? 0 : 1;
  return report;
}

ordered_json to_json(const ScoreReport &r) {
  ordered_json j;
  j["spice"] = r.spice;
  j["spice_d"] = r.spice_d;
  j["pr_s"] = r.pr_s;
  j["re_s"] = r.re_s;
  j["pr_sd"] = r.pr_sd;
  j["re_sd"] = r.re_sd;
  j["direction_only"] = r.direction_only;
  ordered_json c;
  c["cand_tuples"] = r.counts.cand_tuples;
  c["ref_tuples"] = r.counts.ref_tuples;
  c["matched_tuples"] = r.counts.matched_tuples;
  c["cand_dirs"] = r.counts.cand_dirs;
  c["ref_dirs"] = r.counts.ref_dirs;
  c["lcs"] = r.counts.lcs;
  j["counts"] = c;
  return j;
}

ordered_json to_json(const CorpusReport &report) {
  ordered_json j;
  j["taxonomy"] = report.taxonomy;
  j["aggregation"] = std::string(to_string(report.aggregation));
  j["records"] = ordered_json::array();
  for (const auto &r : report.records) {
    ordered_json row;
    row["id"] = r.id;
    row.update(to_json(r.report));
    j["records"].push_back(std::move(row));
  }
  ordered_json corpus;
  corpus["records"] = report.records.size();
  corpus["mean_spice"] = report.mean_spice;
  corpus["mean_spice_d"] = report.mean_spice_d;
  corpus["direction_only_records"] = report.direction_only_records;
  corpus["unused_references"] = report.unused_references;
  j["corpus"] = corpus;
  return j;
}

namespace {

Eigen::MatrixXd parse_matrix(const json &doc, const char *key, bool required) {
  if (!doc.contains(key)) {
    if (required) throw SchemaError(std::string("feature file is missing \"") + key + "\"");
    return {};
  }
  const json &rows = doc[key];
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty())
    throw SchemaError(std::string("\"") + key + "\" must be a nonempty list of nonempty lists");
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const json &row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols)
      throw SchemaError(std::string("\"") + key + "\" row " + std::to_string(r) +
                        " does not have " + std::to_string(n_cols) + " entries");
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      const json &v = row[static_cast<std::size_t>(c)];
      if (!v.is_number())
        throw SchemaError(std::string("\"") + key + "\" has a non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

ordered_json matrix_json(const AlignmentMatrix &m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

FeatureSet parse_features(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw SchemaError(std::string("feature file: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("feature file must be a JSON object");

  FeatureSet f;
  f.sub_instructions = parse_matrix(doc, "sub_instructions", true);
  f.panoramas = parse_matrix(doc, "panoramas", true);
  f.words = parse_matrix(doc, "words", true);
  if (doc.contains("attention")) f.attention = parse_matrix(doc, "attention", false);

  if (!doc.contains("word_to_sub") || !doc["word_to_sub"].is_array())
    throw SchemaError("feature file is missing list \"word_to_sub\"");
  for (const auto &v : doc["word_to_sub"]) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw SchemaError("\"word_to_sub\" entries must be non-negative integers");
    f.word_to_sub.push_back(v.get<std::size_t>());
  }
  if (f.word_to_sub.size() != static_cast<std::size_t>(f.words.rows()))
    throw SchemaError("\"word_to_sub\" has " + std::to_string(f.word_to_sub.size()) +
                      " entries but there are " + std::to_string(f.words.rows()) +
                      " word vectors");
  if (doc.contains("ce")) {
    if (!doc["ce"].is_number()) throw SchemaError("\"ce\" must be a number");
    f.ce = doc["ce"].get<double>();
  }
  return f;
}

AlignmentReport run_alignment(const FeatureSet &f, const AlignOptions &options) {
  AlignmentReport out;
  const auto dtw = dtw_path(build_cost(f.sub_instructions, f.panoramas));
  out.a = dtw.alignment;
  out.path_cost = dtw.cost;
  out.a_prime = expand_alignment(out.a, f.word_to_sub).a_prime;

  if (f.attention) {
    out.attention_supplied = true;
    out.l_att = attention_coverage_loss(*f.attention, out.a_prime, options.eps);
  } else {
    out.l_att = attention_coverage_loss(dot_product_attention(f.panoramas, f.words),
                                        out.a_prime, options.eps);
  }
  out.l_nce = contrastive_loss(f.panoramas, f.words, out.a_prime);
  out.ce = f.ce;
  out.total = total_loss(out.ce, out.l_att, out.l_nce, options.lambda1, options.lambda2);
  return out;
}

ordered_json to_json(const AlignmentReport &r, const AlignOptions &options) {
  ordered_json j;
  j["A"] = matrix_json(r.a);
  j["A_prime"] = matrix_json(r.a_prime);
  j["path_cost"] = r.path_cost;
  j["l_att"] = r.l_att;
  j["l_nce"] = r.l_nce;
  j["ce"] = r.ce;
  j["lambda1"] = options.lambda1;
  j["lambda2"] = options.lambda2;
  j["eps"] = options.eps;
  j["total"] = r.total;
  j["attention"] = r.attention_supplied ? "supplied" : "dot_product_softmax";
  return j;
}

}  // namespace naveval
