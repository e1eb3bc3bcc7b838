#pragma once

// Treebank statistics, word-order profiles, projectivity and
// train/dev/test partitioning.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treebank/conllu.hpp"

namespace treebank {

struct LabelShare {
  std::size_t count = 0;
  double percentage = 0.0;  // of all words
};

struct StatsReport {
  std::size_t n_sentences = 0;
  std::size_t n_tokens = 0;
  std::size_t n_words = 0;
  double avg_tokens_per_sentence = 0.0;
  double avg_words_per_sentence = 0.0;
  // |HEAD - ID| over non-root words, punctuation included
  double avg_arc_length = 0.0;
  // same, punctuation excluded
  double avg_arc_length_no_punct = 0.0;
  std::size_t n_arcs = 0;
  std::size_t n_arcs_no_punct = 0;
  std::size_t n_unique_upos = 0;
  std::size_t n_unique_features = 0;  // distinct Name=Value pairs
  std::size_t n_unique_deprels = 0;
  std::map<std::string, LabelShare> deprels;
};

namespace detail {

inline bool is_punct(const Token& t) { return t.deprel == "punct"; }

/// Relation label without its subtype ("nmod:poss" -> "nmod").
inline std::string_view base_label(std::string_view deprel) {
  auto colon = deprel.find(':');
  return colon == std::string_view::npos ? deprel : deprel.substr(0, colon);
}

}  // namespace detail

inline StatsReport treebank_stats(const Document& d) {
  StatsReport r;
  r.n_sentences = d.sentences.size();
  std::set<std::string> upos, features;
  std::uint64_t arc_sum = 0, arc_sum_no_punct = 0;
  for (const auto& s : d.sentences) {
    r.n_tokens += s.token_count();
    for (const Token* t : s.words()) {
      ++r.n_words;
      if (!t->upos.empty()) upos.insert(t->upos);
      for (auto& p : t->feats.set.pairs()) features.insert(std::move(p));
      if (!t->deprel.empty()) ++r.deprels[t->deprel].count;
      if (t->head && *t->head > 0) {
        auto len = static_cast<std::uint64_t>(std::abs(*t->head - t->id.first));
        arc_sum += len;
        ++r.n_arcs;
        if (!detail::is_punct(*t)) {
          arc_sum_no_punct += len;
          ++r.n_arcs_no_punct;
        }
      }
    }
  }
  if (r.n_sentences) {
    r.avg_tokens_per_sentence = static_cast<double>(r.n_tokens) / static_cast<double>(r.n_sentences);
    r.avg_words_per_sentence = static_cast<double>(r.n_words) / static_cast<double>(r.n_sentences);
  }
  if (r.n_arcs) r.avg_arc_length = static_cast<double>(arc_sum) / static_cast<double>(r.n_arcs);
  if (r.n_arcs_no_punct) r.avg_arc_length_no_punct = static_cast<double>(arc_sum_no_punct) / static_cast<double>(r.n_arcs_no_punct);
  for (auto& [label, share] : r.deprels)
    share.percentage = 100.0 * static_cast<double>(share.count) / static_cast<double>(r.n_words);
  r.n_unique_upos = upos.size();
  r.n_unique_features = features.size();
  r.n_unique_deprels = r.deprels.size();
  return r;
}

// ---------------------------------------------------------------------------
// Word order

enum class WordOrderMode { PairsAndTriples, TriplesOnly };
enum class PredicateScope { MainClause, AllPredicates };

/// Order patterns in a fixed reporting order.
inline const std::array<std::string_view, 10>& word_order_patterns() {
  static const std::array<std::string_view, 10> p = {"SOV", "OSV", "SVO", "OVS", "VSO", "VOS", "SV", "VS", "OV", "VO"};
  return p;
}

struct WordOrderProfile {
  WordOrderMode mode = WordOrderMode::TriplesOnly;
  PredicateScope scope = PredicateScope::AllPredicates;
  std::map<std::string, LabelShare> counts;  // percentage of `total`
  std::size_t total = 0;

  std::size_t count(std::string_view pattern) const {
    auto it = counts.find(std::string(pattern));
    return it == counts.end() ? 0 : it->second.count;
  }
  /// Patterns by decreasing count, ties in reporting order.
  std::vector<std::string> ranking() const {
    std::vector<std::string> out;
    for (auto p : word_order_patterns())
      if (count(p)) out.emplace_back(p);
    std::stable_sort(out.begin(), out.end(), [this](const auto& a, const auto& b) { return count(a) > count(b); });
    return out;
  }
};

namespace detail {

inline bool clause_link(std::string_view deprel) {
  auto base = base_label(deprel);
  return base == "conj" || base == "advcl" || base == "ccomp" || base == "acl" || base == "csubj" ||
         base == "parataxis";
}

/// Word IDs of the predicates in scope: the root, plus (all-predicates)
/// anything reached from it through clause-linking relations.
inline std::vector<int> predicates(const Sentence& s, PredicateScope scope) {
  auto words = s.words();
  const int n = static_cast<int>(words.size());
  std::vector<char> is_pred(n + 1, 0);
  std::vector<std::vector<int>> children(n + 1);
  for (const Token* t : words) {
    if (t->head && *t->head >= 0 && *t->head <= n && t->id.first <= n) children[*t->head].push_back(t->id.first);
  }
  std::vector<int> stack;
  for (int c : children[0]) {
    is_pred[c] = 1;
    stack.push_back(c);
  }
  if (scope == PredicateScope::AllPredicates) {
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      for (int c : children[p]) {
        if (!is_pred[c] && clause_link(words[c - 1]->deprel)) {
          is_pred[c] = 1;
          stack.push_back(c);
        }
      }
    }
  }
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (is_pred[i]) out.push_back(i);
  return out;
}

}  // namespace detail

inline WordOrderProfile word_order_profile(const Document& d, PredicateScope scope = PredicateScope::AllPredicates,
                                           WordOrderMode mode = WordOrderMode::TriplesOnly) {
  WordOrderProfile prof;
  prof.mode = mode;
  prof.scope = scope;
  for (const auto& s : d.sentences) {
    auto words = s.words();
    for (int v : detail::predicates(s, scope)) {
      int subj = 0, obj = 0;
      for (const Token* t : words) {
        if (t->head != v) continue;
        auto base = detail::base_label(t->deprel);
        if (!subj && (base == "nsubj" || base == "csubj")) subj = t->id.first;
        if (!obj && base == "obj") obj = t->id.first;
      }
      if (!subj && !obj) continue;
      if ((!subj || !obj) && mode == WordOrderMode::TriplesOnly) continue;
      std::vector<std::pair<int, char>> items = {{v, 'V'}};
      if (subj) items.push_back({subj, 'S'});
      if (obj) items.push_back({obj, 'O'});
      std::sort(items.begin(), items.end());
      std::string pattern;
      for (auto& [pos, letter] : items) pattern += letter;
      ++prof.counts[pattern].count;
      ++prof.total;
    }
  }
  for (auto& [p, share] : prof.counts)
    share.percentage = 100.0 * static_cast<double>(share.count) / static_cast<double>(prof.total);
  return prof;
}

// ---------------------------------------------------------------------------
// Projectivity

/// True iff no two arcs cross, with the root arc drawn from position 0.
/// For a tree this holds iff every subtree covers a contiguous span.
inline bool is_projective(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  // heads[i] is the head of word i+1
  std::vector<int> lo(n + 1), hi(n + 1), size(n + 1, 1), depth(n + 1, -1);
  for (int i = 0; i <= n; ++i) lo[i] = hi[i] = i;
  depth[0] = 0;
  // resolve depths; bail out to the pairwise check if the heads are not a tree
  bool tree = true;
  for (int i = 1; i <= n && tree; ++i) {
    std::vector<int> path;
    int cur = i;
    while (depth[cur] < 0) {
      path.push_back(cur);
      int h = heads[cur - 1];
      if (h < 0 || h > n || static_cast<int>(path.size()) > n) {
        tree = false;
        break;
      }
      cur = h;
    }
    if (!tree) break;
    for (auto it = path.rbegin(); it != path.rend(); ++it) depth[*it] = depth[heads[*it - 1]] + 1;
  }
  if (!tree) {
    for (int a = 1; a <= n; ++a) {
      int a1 = std::min(a, heads[a - 1]), a2 = std::max(a, heads[a - 1]);
      for (int b = 1; b <= n; ++b) {
        int b1 = std::min(b, heads[b - 1]), b2 = std::max(b, heads[b - 1]);
        if ((a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2)) return false;
      }
    }
    return true;
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] > depth[b]; });
  for (int v : order) {
    int h = heads[v - 1];
    lo[h] = std::min(lo[h], lo[v]);
    hi[h] = std::max(hi[h], hi[v]);
    size[h] += size[v];
  }
  for (int v = 1; v <= n; ++v)
    if (hi[v] - lo[v] + 1 != size[v]) return false;
  return true;
}

inline bool is_projective(const Sentence& s) {
  std::vector<int> heads;
  for (const Token* t : s.words()) heads.push_back(t->head.value_or(0));
  return is_projective(heads);
}

// ---------------------------------------------------------------------------
// Partitioning

struct Split {
  Document train, dev, test;
};

struct SectionSplitSizes {
  std::string section;
  std::size_t train = 0, dev = 0, test = 0;
};

struct Ratios {
  double train = 0.8, dev = 0.1, test = 0.1;
};

namespace detail {

inline std::size_t ceil_share(std::size_t n, double ratio) {
  const double x = static_cast<double>(n) * ratio;
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

/// Fisher-Yates over mt19937_64 with rejection sampling; the result is the
/// same on every standard library.
inline void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(v[i - 1], v[r % bound]);
  }
}

}  // namespace detail

/// dev = ceil(n * ratios.dev), test = ceil(n * ratios.test), train = rest.
inline SectionSplitSizes split_sizes(std::size_t n, const Ratios& ratios = {}) {
  if (ratios.train <= 0 || ratios.dev <= 0 || ratios.test <= 0 ||
      std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-6)
    throw std::invalid_argument("split ratios must be positive and sum to 1");
  SectionSplitSizes s;
  s.dev = detail::ceil_share(n, ratios.dev);
  s.test = detail::ceil_share(n, ratios.test);
  if (s.dev + s.test > n)
    throw std::invalid_argument("section of " + std::to_string(n) + " sentences is smaller than dev+test (" +
                                std::to_string(s.dev + s.test) + ")");
  s.train = n - s.dev - s.test;
  return s;
}

/// Randomly assigns the sentences of each section to train/dev/test. Each
/// section is shuffled with its own generator seeded from `seed` and the
/// section's position. Within a split, sentences keep their original order and
/// sections are concatenated in input order.
inline Split partition(const std::vector<Document>& sections, std::uint64_t seed, const Ratios& ratios = {},
                       std::vector<SectionSplitSizes>* sizes = nullptr) {
  Split out;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const auto& sec = sections[k];
    auto sz = split_sizes(sec.sentences.size(), ratios);
    sz.section = sec.section.value_or("");
    std::vector<std::size_t> idx(sec.sentences.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * k);
    detail::shuffle(idx, rng);
    std::vector<char> bucket(idx.size(), 't');
    for (std::size_t i = 0; i < sz.dev; ++i) bucket[idx[i]] = 'd';
    for (std::size_t i = sz.dev; i < sz.dev + sz.test; ++i) bucket[idx[i]] = 'e';
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Document& dst = bucket[i] == 'd' ? out.dev : bucket[i] == 'e' ? out.test : out.train;
      dst.sentences.push_back(sec.sentences[i]);
    }
    if (sizes) sizes->push_back(sz);
  }
  return out;
}

/// Groups sentences by the sent_id prefix before the first '_' ("ins_167" ->
/// "ins"), in order of first appearance. Sentences without a sent_id go to
/// a section named "".
inline std::vector<Document> sections_by_sent_id(const Document& d) {
  std::vector<Document> out;
  std::map<std::string, std::size_t> index;
  for (const auto& s : d.sentences) {
    std::string key;
    if (auto id = s.sent_id()) key = id->substr(0, id->find('_'));
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      out.emplace_back();
      out.back().section = key;
      out.back().source_path = d.source_path;
    }
    out[it->second].sentences.push_back(s);
  }
  return out;
}

}  // namespace treebank
