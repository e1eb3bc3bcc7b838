#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it with in-memory streams.
//
// Exit codes: 0 success, 1 validation issues (validate) or conversion
// failures (convert), 2 usage, I/O, parse or alignment errors.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "treebank/analytics.hpp"
#include "treebank/conllu.hpp"
#include "treebank/evaluation.hpp"
#include "treebank/morphconv.hpp"
#include "treebank/report.hpp"
#include "treebank/validator.hpp"

namespace treebank::cli {

/// Handler for `serve`; the default binds HTTP (see http.hpp). Tests leave
/// it unset.
using ServeFn = int (*)(const std::string& file, const std::string& host, int port, const std::string& schema,
                        std::ostream& out, std::ostream& err);

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return parse_document(in, path);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline Ratios parse_ratios(const std::string& text) {
  auto parts = detail::split(text, ',');
  if (parts.size() != 3) throw UsageError("--ratios expects three comma-separated numbers");
  Ratios r;
  try {
    r.train = std::stod(parts[0]);
    r.dev = std::stod(parts[1]);
    r.test = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw UsageError("--ratios: not a number in '" + text + "'");
  }
  return r;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               ServeFn serve_fn = nullptr) {
  CLI::App app{"CoNLL-U treebank toolkit", "treebank"};
  app.require_subcommand(1);

  bool machine = false;
  auto add_machine = [&](CLI::App* sub) { sub->add_flag("--machine", machine, "emit key=value lines"); };

  std::string file, gold, pred, schema_path, upos_map_path, ratios_text = "0.8,0.1,0.1", out_prefix;
  std::string mode = "triples", scope = "all", host = "127.0.0.1";
  bool by_section = false, ignore_punct = false, fallback = false;
  std::uint64_t seed = 1;
  int port = 8080;

  auto* validate = app.add_subcommand("validate", "check a file against the validation rules");
  validate->add_option("file", file, "CoNLL-U file")->required();
  validate->add_option("--schema", schema_path, "schema file ([upos]/[deprel]/[features] sections)");
  add_machine(validate);

  auto* stats = app.add_subcommand("stats", "treebank statistics and relation distribution");
  stats->add_option("file", file, "CoNLL-U file")->required();
  stats->add_flag("--by-section", by_section, "also break counts down by sent_id prefix");
  add_machine(stats);

  auto* wordorder = app.add_subcommand("wordorder", "subject/object/verb order counts");
  wordorder->add_option("file", file, "CoNLL-U file")->required();
  wordorder->add_option("--mode", mode, "triples | pairs")->check(CLI::IsMember({"triples", "pairs"}));
  wordorder->add_option("--scope", scope, "all | main")->check(CLI::IsMember({"all", "main"}));
  add_machine(wordorder);

  auto* eval = app.add_subcommand("eval", "UAS/LAS of a predicted file against gold");
  eval->add_option("gold", gold, "gold CoNLL-U")->required();
  eval->add_option("pred", pred, "predicted CoNLL-U")->required();
  eval->add_flag("--ignore-punct", ignore_punct, "exclude punct words");
  add_machine(eval);

  auto* kappa = app.add_subcommand("kappa", "Cohen's kappa over DEPREL labels of aligned words");
  kappa->add_option("gold", gold, "first annotation")->required();
  kappa->add_option("pred", pred, "second annotation")->required();
  add_machine(kappa);

  auto* morph_eval = app.add_subcommand("morph-eval", "FEATS token accuracy and feature P/R/F1");
  morph_eval->add_option("gold", gold, "gold CoNLL-U")->required();
  morph_eval->add_option("pred", pred, "predicted CoNLL-U")->required();
  add_machine(morph_eval);

  auto* convert = app.add_subcommand("convert", "morphological analyses -> lemma, UPOS, FEATS");
  convert->add_option("file", file, "analyses, one per line (default: stdin)");
  convert->add_flag("--fallback", fallback, "drop unknown tags with a warning instead of failing");
  convert->add_option("--upos-map", upos_map_path, "file of 'Category UPOS' lines");

  auto* split = app.add_subcommand("split", "train/dev/test partition");
  split->add_option("file", file, "CoNLL-U file")->required();
  split->add_option("--seed", seed, "shuffle seed");
  split->add_flag("--by-section", by_section, "split each sent_id-prefix section separately");
  split->add_option("--ratios", ratios_text, "train,dev,test");
  split->add_option("--out-prefix", out_prefix, "output prefix (default: input path without extension + '-')");
  add_machine(split);

  auto* serve = app.add_subcommand("serve", "HTTP service for the annotation UI");
  serve->add_option("--file", file, "CoNLL-U file")->required();
  serve->add_option("--port", port, "port");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--schema", schema_path, "schema file");

  std::vector<const char*> argv = {"treebank"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (validate->parsed()) {
      const Schema schema = schema_path.empty() ? Schema::defaults() : load_schema_file(schema_path);
      const auto issues = validate_document(load_document(file), schema);
      report::write_issues(out, issues, machine);
      return issues.empty() ? 0 : 1;
    }
    if (stats->parsed()) {
      const auto doc = load_document(file);
      if (by_section) report::write_section_stats(out, sections_by_sent_id(doc), machine);
      report::write_stats(out, treebank_stats(doc), machine);
      return 0;
    }
    if (wordorder->parsed()) {
      const auto profile = word_order_profile(load_document(file),
                                              scope == "all" ? PredicateScope::AllPredicates : PredicateScope::MainClause,
                                              mode == "triples" ? WordOrderMode::TriplesOnly : WordOrderMode::PairsAndTriples);
      report::write_word_order(out, profile, machine);
      return 0;
    }
    if (eval->parsed()) {
      report::write_eval(out, evaluate(load_document(gold), load_document(pred), {ignore_punct}), machine);
      return 0;
    }
    if (kappa->parsed()) {
      auto [a, b] = aligned_labels(load_document(gold), load_document(pred));
      report::write_kappa(out, cohen_kappa_detail(a, b), machine);
      return 0;
    }
    if (morph_eval->parsed()) {
      report::write_morph(out, morph_scores(load_document(gold), load_document(pred)), machine);
      return 0;
    }
    if (convert->parsed()) {
      morph::ConversionOptions options;
      options.drop_unknown = fallback;
      if (!upos_map_path.empty()) {
        std::ifstream in(upos_map_path);
        if (!in) throw UsageError("cannot open '" + upos_map_path + "'");
        options.upos_map = morph::load_upos_map(in);
      }
      morph::BatchResult result;
      if (file.empty() || file == "-") {
        result = morph::convert_stream(std::cin, out, options);
      } else {
        std::ifstream in(file);
        if (!in) throw UsageError("cannot open '" + file + "'");
        result = morph::convert_stream(in, out, options);
      }
      for (const auto& d : result.diagnostics) err << d << '\n';
      return result.failed ? 1 : 0;
    }
    if (split->parsed()) {
      const auto ratios = parse_ratios(ratios_text);
      const auto doc = load_document(file);
      std::vector<Document> sections;
      if (by_section) {
        sections = sections_by_sent_id(doc);
      } else {
        sections.push_back(doc);
        sections.back().section = "all";
      }
      std::vector<SectionSplitSizes> sizes;
      const auto parts = partition(sections, seed, ratios, &sizes);
      if (out_prefix.empty()) {
        std::filesystem::path p(file);
        out_prefix = (p.parent_path() / p.stem()).string() + "-";
      }
      const std::pair<const char*, const Document*> outputs[] = {
          {"train", &parts.train}, {"dev", &parts.dev}, {"test", &parts.test}};
      for (const auto& [name, d] : outputs) {
        const auto path = out_prefix + name + ".conllu";
        std::ofstream o(path, std::ios::binary | std::ios::trunc);
        if (!o) throw UsageError("cannot write '" + path + "'");
        serialize_document(o, *d);
      }
      std::size_t tr = 0, dv = 0, te = 0;
      std::vector<std::vector<std::string>> rows = {{"section", "train", "dev", "test", "total"}};
      for (const auto& s : sizes) {
        tr += s.train;
        dv += s.dev;
        te += s.test;
        if (machine) {
          out << "section." << s.section << ".train=" << s.train << "\nsection." << s.section << ".dev=" << s.dev
              << "\nsection." << s.section << ".test=" << s.test << '\n';
        }
        rows.push_back({s.section, std::to_string(s.train), std::to_string(s.dev), std::to_string(s.test),
                        std::to_string(s.train + s.dev + s.test)});
      }
      if (machine) {
        out << "train=" << tr << "\ndev=" << dv << "\ntest=" << te << '\n';
      } else {
        rows.push_back({"total", std::to_string(tr), std::to_string(dv), std::to_string(te), std::to_string(tr + dv + te)});
        report::detail::table(out, rows);
        out << "wrote " << out_prefix << "{train,dev,test}.conllu\n";
      }
      return 0;
    }
    if (serve->parsed()) {
      if (!serve_fn) throw UsageError("serve is not available in this build");
      return serve_fn(file, host, port, schema_path, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace treebank::cli
