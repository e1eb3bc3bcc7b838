#pragma once

// Plain-text and key=value renderings of analytics and evaluation results.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "treebank/analytics.hpp"
#include "treebank/evaluation.hpp"
#include "treebank/validator.hpp"

namespace treebank::report {

inline std::string fixed(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

namespace detail {

inline std::string pad_right(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}
inline std::string pad_left(std::string s, std::size_t w) {
  if (s.size() < w) s.insert(0, w - s.size(), ' ');
  return s;
}

/// Aligned table: first column left-aligned, the rest right-aligned.
inline void table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out << "  ";
      out << (c == 0 ? pad_right(r[c], width[c]) : pad_left(r[c], width[c]));
    }
    out << '\n';
  }
}

}  // namespace detail

inline void write_stats(std::ostream& out, const StatsReport& r, bool machine) {
  if (machine) {
    out << "sentences=" << r.n_sentences << '\n'
        << "tokens=" << r.n_tokens << '\n'
        << "words=" << r.n_words << '\n'
        << "avg_tokens_per_sentence=" << fixed(r.avg_tokens_per_sentence, 4) << '\n'
        << "avg_words_per_sentence=" << fixed(r.avg_words_per_sentence, 4) << '\n'
        << "avg_arc_length=" << fixed(r.avg_arc_length, 4) << '\n'
        << "avg_arc_length_no_punct=" << fixed(r.avg_arc_length_no_punct, 4) << '\n'
        << "unique_upos=" << r.n_unique_upos << '\n'
        << "unique_features=" << r.n_unique_features << '\n'
        << "unique_deprels=" << r.n_unique_deprels << '\n';
    for (const auto& [label, share] : r.deprels)
      out << "deprel." << label << ".count=" << share.count << '\n'
          << "deprel." << label << ".percent=" << fixed(share.percentage, 2) << '\n';
    return;
  }
  out << "sentences: " << r.n_sentences << '\n'
      << "tokens: " << r.n_tokens << '\n'
      << "words: " << r.n_words << '\n'
      << "avg tokens per sentence: " << fixed(r.avg_tokens_per_sentence) << '\n'
      << "avg words per sentence: " << fixed(r.avg_words_per_sentence) << '\n'
      << "avg arc length: " << fixed(r.avg_arc_length) << '\n'
      << "avg arc length (excluding punct): " << fixed(r.avg_arc_length_no_punct) << '\n'
      << "unique UPOS tags: " << r.n_unique_upos << '\n'
      << "unique features: " << r.n_unique_features << '\n'
      << "unique relations: " << r.n_unique_deprels << '\n';
  if (r.deprels.empty()) return;
  out << '\n';
  std::vector<std::vector<std::string>> rows = {{"relation", "count", "percent"}};
  for (const auto& [label, share] : r.deprels)
    rows.push_back({label, std::to_string(share.count), fixed(share.percentage) + "%"});
  detail::table(out, rows);
}

/// Per-section sentence/token/word counts with a total row.
inline void write_section_stats(std::ostream& out, const std::vector<Document>& sections, bool machine) {
  std::size_t s_total = 0, t_total = 0, w_total = 0;
  std::vector<std::vector<std::string>> rows = {{"section", "sentences", "tokens", "words"}};
  for (const auto& d : sections) {
    const auto name = d.section.value_or("");
    const auto t = d.token_count(), w = d.word_count();
    s_total += d.sentences.size();
    t_total += t;
    w_total += w;
    if (machine) {
      out << "section." << name << ".sentences=" << d.sentences.size() << '\n'
          << "section." << name << ".tokens=" << t << '\n'
          << "section." << name << ".words=" << w << '\n';
    }
    rows.push_back({name.empty() ? "(none)" : name, std::to_string(d.sentences.size()), std::to_string(t),
                    std::to_string(w)});
  }
  if (machine) return;
  rows.push_back({"total", std::to_string(s_total), std::to_string(t_total), std::to_string(w_total)});
  detail::table(out, rows);
  out << '\n';
}

inline void write_word_order(std::ostream& out, const WordOrderProfile& p, bool machine) {
  const auto ranking = p.ranking();
  if (machine) {
    out << "mode=" << (p.mode == WordOrderMode::TriplesOnly ? "triples" : "pairs") << '\n'
        << "scope=" << (p.scope == PredicateScope::AllPredicates ? "all" : "main") << '\n'
        << "total=" << p.total << '\n';
    for (const auto& pattern : ranking) {
      const auto& share = p.counts.at(pattern);
      out << "order." << pattern << ".count=" << share.count << '\n'
          << "order." << pattern << ".percent=" << fixed(share.percentage) << '\n';
    }
    return;
  }
  std::vector<std::vector<std::string>> rows = {{"order", "count", "percent"}};
  for (const auto& pattern : ranking) {
    const auto& share = p.counts.at(pattern);
    rows.push_back({pattern, std::to_string(share.count), fixed(share.percentage)});
  }
  detail::table(out, rows);
  out << "total: " << p.total << '\n';
}

inline void write_issues(std::ostream& out, const std::vector<ValidationIssue>& issues, bool machine) {
  for (const auto& i : issues) {
    if (machine) {
      out << "issue=" << i.sentence_ref() << '\t' << (i.token ? i.token->str() : "-") << '\t' << to_string(i.code)
          << '\t' << i.message << '\n';
    } else {
      out << i.sentence_ref() << (i.token ? " token " + i.token->str() : std::string()) << ": [" << to_string(i.code)
          << "] " << i.message << '\n';
    }
  }
  if (machine) {
    out << "issues=" << issues.size() << '\n';
  } else {
    out << issues.size() << " issues\n";
  }
}

inline void write_eval(std::ostream& out, const EvalReport& r, bool machine) {
  const auto& a = r.attachment;
  if (machine) {
    out << "gold_words=" << a.gold_words << '\n'
        << "pred_words=" << a.pred_words << '\n'
        << "aligned_words=" << a.aligned_words << '\n'
        << "head_matches=" << a.head_matches << '\n'
        << "label_matches=" << a.label_matches << '\n'
        << "uas_precision=" << fixed(a.uas.precision, 6) << '\n'
        << "uas_recall=" << fixed(a.uas.recall, 6) << '\n'
        << "uas_f1=" << fixed(a.uas.f1, 6) << '\n'
        << "las_precision=" << fixed(a.las.precision, 6) << '\n'
        << "las_recall=" << fixed(a.las.recall, 6) << '\n'
        << "las_f1=" << fixed(a.las.f1, 6) << '\n';
    if (r.kappa) out << "kappa=" << fixed(r.kappa->kappa, 6) << '\n';
    return;
  }
  std::vector<std::vector<std::string>> rows = {{"metric", "precision", "recall", "F1"},
                                                {"UAS", fixed(a.uas.precision * 100), fixed(a.uas.recall * 100), fixed(a.uas.f1 * 100)},
                                                {"LAS", fixed(a.las.precision * 100), fixed(a.las.recall * 100), fixed(a.las.f1 * 100)}};
  detail::table(out, rows);
  out << "gold words: " << a.gold_words << ", predicted words: " << a.pred_words << ", aligned: " << a.aligned_words
      << '\n';
  if (r.kappa) {
    out << "label kappa: " << fixed(r.kappa->kappa, 4) << '\n';
  } else {
    out << "label kappa: n/a (tokenization differs)\n";
  }
}

inline void write_kappa(std::ostream& out, const KappaResult& k, bool machine) {
  if (machine) {
    out << "n=" << k.n << "\nobserved=" << fixed(k.observed, 6) << "\nexpected=" << fixed(k.expected, 6)
        << "\nkappa=" << fixed(k.kappa, 6) << '\n';
    return;
  }
  out << "labels compared: " << k.n << '\n'
      << "observed agreement: " << fixed(k.observed, 4) << '\n'
      << "chance agreement: " << fixed(k.expected, 4) << '\n'
      << "kappa: " << fixed(k.kappa, 4) << '\n';
}

inline void write_morph(std::ostream& out, const MorphScores& m, bool machine) {
  if (machine) {
    out << "words=" << m.words << "\nexact_words=" << m.exact_words << "\ngold_features=" << m.gold_features
        << "\npred_features=" << m.pred_features << "\ncorrect_features=" << m.correct_features
        << "\ntoken_accuracy=" << fixed(m.token_accuracy, 6) << "\nprecision=" << fixed(m.features.precision, 6)
        << "\nrecall=" << fixed(m.features.recall, 6) << "\nf1=" << fixed(m.features.f1, 6) << '\n';
    return;
  }
  std::vector<std::vector<std::string>> rows = {
      {"token accuracy", "recall", "precision", "F1"},
      {fixed(m.token_accuracy), fixed(m.features.recall), fixed(m.features.precision), fixed(m.features.f1)}};
  detail::table(out, rows);
}

}  // namespace treebank::report
