#pragma once

// Attachment scores, Cohen's kappa and morphological feature scores between
// two parallel documents.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treebank/conllu.hpp"

namespace treebank {

class AlignmentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline double harmonic_mean(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

struct AttachmentScores {
  std::size_t gold_words = 0;
  std::size_t pred_words = 0;
  std::size_t aligned_words = 0;
  std::size_t head_matches = 0;   // aligned words whose head aligns with the gold head
  std::size_t label_matches = 0;  // ... and whose deprel is identical
  PRF uas;
  PRF las;
};

struct AttachmentOptions {
  bool ignore_punct = false;
};

namespace detail {

struct Span {
  std::size_t begin, end;
  auto operator<=>(const Span&) const = default;
};

/// Character span of each word in the concatenation of word FORMs.
inline std::vector<Span> word_spans(const std::vector<const Token*>& words) {
  std::vector<Span> out;
  std::size_t offset = 0;
  for (const Token* t : words) {
    out.push_back({offset, offset + t->form.size()});
    offset += t->form.size();
  }
  return out;
}

inline PRF prf(std::size_t correct, std::size_t predicted, std::size_t gold) {
  PRF r;
  r.precision = predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
  r.recall = gold ? static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
  r.f1 = harmonic_mean(r.precision, r.recall);
  return r;
}

}  // namespace detail

/// UAS/LAS as F1 over words aligned by their character span in the
/// concatenated FORMs of each sentence. With identical tokenization
/// precision = recall = plain attachment accuracy.
inline AttachmentScores attachment_scores(const Document& gold, const Document& pred,
                                          const AttachmentOptions& options = {}) {
  if (gold.sentences.size() != pred.sentences.size())
    throw AlignmentError("sentence count mismatch: gold " + std::to_string(gold.sentences.size()) + ", predicted " +
                         std::to_string(pred.sentences.size()));
  AttachmentScores r;
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const auto gw = gold.sentences[si].words();
    const auto pw = pred.sentences[si].words();
    const auto gs = detail::word_spans(gw);
    const auto ps = detail::word_spans(pw);

    std::map<detail::Span, std::size_t> gold_at;
    for (std::size_t i = 0; i < gs.size(); ++i) gold_at.emplace(gs[i], i);
    // pred word index -> aligned gold word index
    std::vector<std::ptrdiff_t> align(pw.size(), -1);
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (auto it = gold_at.find(ps[j]); it != gold_at.end()) align[j] = static_cast<std::ptrdiff_t>(it->second);

    for (const Token* t : gw)
      if (!(options.ignore_punct && t->deprel == "punct")) ++r.gold_words;

    for (std::size_t j = 0; j < pw.size(); ++j) {
      const Token* p = pw[j];
      if (align[j] < 0) {
        if (!(options.ignore_punct && p->deprel == "punct")) ++r.pred_words;
        continue;
      }
      const Token* g = gw[static_cast<std::size_t>(align[j])];
      if (options.ignore_punct && g->deprel == "punct") continue;
      ++r.pred_words;
      ++r.aligned_words;

      // The predicted head must land on the word aligned to the gold head.
      const int ph = p->head.value_or(-1);
      const int gh = g->head.value_or(-1);
      bool head_ok = false;
      if (ph == 0 || gh == 0) {
        head_ok = ph == 0 && gh == 0;
      } else if (ph > 0 && gh > 0 && static_cast<std::size_t>(ph) <= pw.size()) {
        head_ok = align[static_cast<std::size_t>(ph - 1)] == gh - 1;
      }
      if (head_ok) {
        ++r.head_matches;
        if (p->deprel == g->deprel) ++r.label_matches;
      }
    }
  }
  if (r.gold_words == 0 && r.pred_words == 0) throw AlignmentError("no words to score");
  r.uas = detail::prf(r.head_matches, r.pred_words, r.gold_words);
  r.las = detail::prf(r.label_matches, r.pred_words, r.gold_words);
  return r;
}

struct KappaResult {
  double kappa = 0.0;
  double observed = 0.0;  // p_o
  double expected = 0.0;  // p_e
  std::size_t n = 0;
};

/// Cohen's kappa between two label sequences of equal length.
inline KappaResult cohen_kappa_detail(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size())
    throw AlignmentError("label sequences differ in length: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.empty()) throw AlignmentError("empty label sequences");
  KappaResult r;
  r.n = a.size();
  std::map<std::string, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++agree;
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
  }
  const double n = static_cast<double>(r.n);
  r.observed = static_cast<double>(agree) / n;
  for (const auto& [label, m] : marginals)
    r.expected += (static_cast<double>(m.first) / n) * (static_cast<double>(m.second) / n);
  if (r.expected >= 1.0) {
    // both annotators used a single, identical label throughout
    r.kappa = 1.0;
  } else {
    r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
  }
  return r;
}

inline double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return cohen_kappa_detail(a, b).kappa;
}

/// Throws unless both documents have the same words (count and FORM) in
/// every sentence.
inline void require_same_tokenization(const Document& gold, const Document& pred) {
  if (gold.sentences.size() != pred.sentences.size())
    throw AlignmentError("sentence count mismatch: gold " + std::to_string(gold.sentences.size()) + ", predicted " +
                         std::to_string(pred.sentences.size()));
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const auto gw = gold.sentences[si].words();
    const auto pw = pred.sentences[si].words();
    if (gw.size() != pw.size())
      throw AlignmentError("tokenization mismatch in sentence " + std::to_string(si + 1) + ": " +
                           std::to_string(gw.size()) + " vs " + std::to_string(pw.size()) + " words");
    for (std::size_t i = 0; i < gw.size(); ++i)
      if (gw[i]->form != pw[i]->form)
        throw AlignmentError("tokenization mismatch in sentence " + std::to_string(si + 1) + " at word " +
                             std::to_string(i + 1) + ": '" + gw[i]->form + "' vs '" + pw[i]->form + "'");
  }
}

/// DEPREL sequences of positionally aligned words, for kappa.
inline std::pair<std::vector<std::string>, std::vector<std::string>> aligned_labels(const Document& a,
                                                                                    const Document& b) {
  require_same_tokenization(a, b);
  std::pair<std::vector<std::string>, std::vector<std::string>> out;
  for (std::size_t si = 0; si < a.sentences.size(); ++si) {
    for (const Token* t : a.sentences[si].words()) out.first.push_back(t->deprel);
    for (const Token* t : b.sentences[si].words()) out.second.push_back(t->deprel);
  }
  return out;
}

struct MorphScores {
  std::size_t words = 0;
  std::size_t exact_words = 0;  // full FeatureSet identical
  std::size_t gold_features = 0;
  std::size_t pred_features = 0;
  std::size_t correct_features = 0;
  double token_accuracy = 0.0;
  PRF features;
};

/// Token accuracy plus feature precision/recall/F1 pooled over all words.
/// With nothing predicted precision is 1; with nothing in gold recall is 1.
inline MorphScores morph_scores(const Document& gold, const Document& pred) {
  require_same_tokenization(gold, pred);
  MorphScores r;
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const auto gw = gold.sentences[si].words();
    const auto pw = pred.sentences[si].words();
    for (std::size_t i = 0; i < gw.size(); ++i) {
      const auto& g = gw[i]->feats.set;
      const auto& p = pw[i]->feats.set;
      ++r.words;
      if (g == p) ++r.exact_words;
      r.gold_features += g.size();
      r.pred_features += p.size();
      for (const auto& [name, value] : p)
        if (g.get(name) == value) ++r.correct_features;
    }
  }
  if (r.words) r.token_accuracy = static_cast<double>(r.exact_words) / static_cast<double>(r.words);
  r.features.precision =
      r.pred_features ? static_cast<double>(r.correct_features) / static_cast<double>(r.pred_features) : 1.0;
  r.features.recall =
      r.gold_features ? static_cast<double>(r.correct_features) / static_cast<double>(r.gold_features) : 1.0;
  r.features.f1 = harmonic_mean(r.features.precision, r.features.recall);
  return r;
}

/// Everything `eval` reports for a gold/predicted pair. Kappa and the morph
/// scores are only defined when tokenization is identical.
struct EvalReport {
  AttachmentScores attachment;
  std::optional<KappaResult> kappa;
  std::optional<MorphScores> morph;
};

inline EvalReport evaluate(const Document& gold, const Document& pred, const AttachmentOptions& options = {}) {
  EvalReport r;
  r.attachment = attachment_scores(gold, pred, options);
  try {
    auto [a, b] = aligned_labels(gold, pred);
    if (!a.empty()) r.kappa = cohen_kappa_detail(a, b);
    r.morph = morph_scores(gold, pred);
  } catch (const AlignmentError&) {
    // tokenization differs: attachment scores only
  }
  return r;
}

}  // namespace treebank
