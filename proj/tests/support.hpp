#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "treebank/conllu.hpp"
#include "treebank/editor.hpp"

namespace testing_support {

using treebank::Document;
using treebank::Sentence;
using treebank::Token;
using treebank::TokenId;

inline const char* const kIns167 =
    "# sent_id = ins_167\n"
    "# text = Sözü uzatıp seni merakta bıraktım galiba.\n"
    "# trans = Probably, I beat around the bush and kept you in suspense.\n"
    "1\tSözü\tsöz\tNOUN\tNoun\tCase=Acc|Number=Sing|Person=3\t2\tobj\t_\t_\n"
    "2\tuzatıp\tuza\tVERB\tVerb\tPolarity=Pos|VerbForm=Conv|Voice=Cau\t5\tadvcl\t_\t_\n"
    "3\tseni\tsen\tPRON\tPers\tCase=Acc|Number=Sing|Person=2\t5\tobj\t_\t_\n"
    "4\tmerakta\tmerak\tNOUN\tNoun\tCase=Loc|Number=Sing|Person=3\t5\tobl\t_\t_\n"
    "5\tbıraktım\tbırak\tVERB\tVerb\tAspect=Perf|Evident=Fh|Number=Sing|Person=1|Polarity=Pos|VerbForm=Fin|Tense=Past\t0\troot\t_\t_\n"
    "6\tgaliba\tgaliba\tADV\tAdverb\t_\t5\tadvmod\t_\tSpaceAfter=No\n"
    "7\t.\t.\tPUNCT\tPunc\t_\t5\tpunct\t_\tSpacesAfter=\\n\n"
    "\n";

/// Random rooted tree over words 1..n: heads[i] is the head of word i+1.
inline std::vector<int> random_tree(int n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> heads(n, 0);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    heads[order[i] - 1] = order[pick(rng)];
  }
  return heads;
}

/// Random head vector with values in 0..n, possibly cyclic or multi-rooted.
inline std::vector<int> random_heads(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n);
  std::vector<int> heads(n);
  for (int i = 0; i < n; ++i) {
    do heads[i] = pick(rng);
    while (heads[i] == i + 1);
  }
  return heads;
}

inline std::string random_form(std::mt19937_64& rng, int min_len = 1, int max_len = 6) {
  static const std::vector<std::string> pieces = {"a", "e", "ı", "i", "o", "ö", "u", "ü", "k", "l", "m",
                                                  "n", "r", "s", "ş", "t", "ç", "ğ", "d", "y", "z", "b"};
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> p(0, pieces.size() - 1);
  std::string out;
  for (int i = len(rng); i > 0; --i) out += pieces[p(rng)];
  return out;
}

inline const std::vector<std::string>& sample_upos() {
  static const std::vector<std::string> v = {"NOUN", "VERB", "ADJ", "ADV", "PRON", "PUNCT", "AUX", "DET", "NUM"};
  return v;
}

inline const std::vector<std::string>& sample_deprels() {
  static const std::vector<std::string> v = {"nsubj", "obj", "obl", "amod", "advmod", "nmod:poss", "det",
                                             "punct", "advcl", "conj", "compound", "cop"};
  return v;
}

inline treebank::FeatureSet random_feats(std::mt19937_64& rng) {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> inventory = {
      {"Case", {"Nom", "Acc", "Dat", "Loc", "Abl", "Gen"}}, {"Number", {"Sing", "Plur"}},
      {"Person", {"1", "2", "3"}},                           {"Number[psor]", {"Sing", "Plur"}},
      {"Person[psor]", {"1", "2", "3"}},                     {"Polarity", {"Pos", "Neg"}},
      {"Tense", {"Past", "Pres", "Fut"}},                    {"Aspect", {"Perf", "Imp", "Prog"}},
      {"VerbForm", {"Fin", "Conv", "Part"}},                 {"Mood", {"Ind", "Imp"}},
      {"evident", {"Fh"}}};
  treebank::FeatureSet out;
  std::bernoulli_distribution take(0.3);
  for (const auto& [name, values] : inventory) {
    if (!take(rng)) continue;
    std::uniform_int_distribution<std::size_t> v(0, values.size() - 1);
    out.set(name, values[v(rng)]);
  }
  return out;
}

/// A valid sentence (tree, schema-conformant labels) of n words with a few
/// random multiword ranges and metadata comments.
inline Sentence random_sentence(int n, std::mt19937_64& rng, int serial = 0) {
  Sentence s;
  s.comments.push_back(treebank::make_comment("# sent_id = gen_" + std::to_string(serial)));
  const auto heads = random_tree(n, rng);
  std::bernoulli_distribution coin(0.5), rare(0.12);
  std::uniform_int_distribution<std::size_t> up(0, sample_upos().size() - 1), dp(0, sample_deprels().size() - 1);

  std::vector<Token> words;
  std::string text;
  for (int i = 1; i <= n; ++i) {
    Token t;
    t.id = TokenId(i);
    t.form = random_form(rng);
    t.lemma = coin(rng) ? t.form : random_form(rng);
    t.upos = sample_upos()[up(rng)];
    t.xpos = coin(rng) ? "" : "X" + t.upos.substr(0, 2);
    t.feats.set = random_feats(rng);
    t.head = heads[i - 1];
    t.deprel = *t.head == 0 ? "root" : sample_deprels()[dp(rng)];
    if (rare(rng)) t.misc.push_back("SpaceAfter=No");
    if (rare(rng)) t.misc.push_back("Gloss=" + random_form(rng));
    text += t.form + " ";
    words.push_back(std::move(t));
  }
  if (coin(rng)) s.comments.push_back(treebank::make_comment("# text = " + text.substr(0, text.size() - 1)));
  if (rare(rng)) s.comments.push_back(treebank::make_comment("# a free-form comment"));

  for (int i = 1; i <= n; ++i) {
    if (i < n && rare(rng)) {
      Token r;
      r.id = TokenId{i, i + 1};
      r.form = words[i - 1].form + words[i].form;
      s.tokens.push_back(std::move(r));
      s.tokens.push_back(words[i - 1]);
      s.tokens.push_back(words[i]);
      ++i;
      continue;
    }
    s.tokens.push_back(words[i - 1]);
  }
  return s;
}

inline Document random_document(int sentences, std::mt19937_64& rng, int min_words = 1, int max_words = 25) {
  Document d;
  std::uniform_int_distribution<int> len(min_words, max_words);
  for (int i = 0; i < sentences; ++i) d.sentences.push_back(random_sentence(len(rng), rng, i));
  return d;
}

/// Byte offset of the second UTF-8 character, or npos for a single character.
inline std::size_t second_char(const std::string& form) {
  for (std::size_t i = 1; i < form.size(); ++i)
    if ((static_cast<unsigned char>(form[i]) & 0xC0) != 0x80) return i;
  return std::string::npos;
}

/// Definition oracle: no two arcs (root arc from position 0) cross.
inline bool projective_by_pairs(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      int a1 = std::min(a, heads[a - 1]), a2 = std::max(a, heads[a - 1]);
      int b1 = std::min(b, heads[b - 1]), b2 = std::max(b, heads[b - 1]);
      if (a1 < b1 && b1 < a2 && a2 < b2) return false;
    }
  return true;
}

/// Words 1..n that do not reach 0 by following heads.
inline std::set<int> unreachable_from_root(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  std::set<int> out;
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (cur != 0 && steps <= n) {
      cur = heads[cur - 1];
      ++steps;
    }
    if (cur != 0) out.insert(i);
  }
  return out;
}

/// Arc multiset as (head FORM, dependent FORM, DEPREL) triples.
inline std::multiset<std::tuple<std::string, std::string, std::string>> arc_multiset(const Sentence& s) {
  std::multiset<std::tuple<std::string, std::string, std::string>> out;
  for (const Token* t : s.words()) {
    std::string head = "<root>";
    if (t->head && *t->head > 0) head = s.word(*t->head)->form;
    out.emplace(head, t->form, t->deprel);
  }
  return out;
}

inline std::vector<int> heads_of(const Sentence& s) {
  std::vector<int> out;
  for (const Token* t : s.words()) out.push_back(t->head.value_or(-1));
  return out;
}

struct AttachmentCounts {
  std::size_t gold = 0, pred = 0, heads = 0, labels = 0;
};

// Brute force: character offsets by linear scans, head agreement by comparing
// the spans of the two heads.
inline AttachmentCounts count_attachment(const Document& gold, const Document& pred, bool ignore_punct) {
  AttachmentCounts c;
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    auto gw = gold.sentences[si].words();
    auto pw = pred.sentences[si].words();
    auto start = [](const std::vector<const Token*>& ws, std::size_t i) {
      std::size_t off = 0;
      for (std::size_t j = 0; j < i; ++j) off += ws[j]->form.size();
      return off;
    };
    auto span_of_head = [&](const std::vector<const Token*>& ws, int head) -> std::pair<long, long> {
      if (head == 0) return {-1, -1};
      auto b = start(ws, static_cast<std::size_t>(head - 1));
      return {static_cast<long>(b), static_cast<long>(b + ws[static_cast<std::size_t>(head - 1)]->form.size())};
    };
    for (const Token* g : gw)
      if (!ignore_punct || g->deprel != "punct") ++c.gold;
    for (std::size_t j = 0; j < pw.size(); ++j) {
      const auto pb = start(pw, j), pe = pb + pw[j]->form.size();
      const Token* match = nullptr;
      for (std::size_t i = 0; i < gw.size(); ++i) {
        const auto gb = start(gw, i), ge = gb + gw[i]->form.size();
        if (gb == pb && ge == pe) match = gw[i];
      }
      if (!match) {
        if (!ignore_punct || pw[j]->deprel != "punct") ++c.pred;
        continue;
      }
      if (ignore_punct && match->deprel == "punct") continue;
      ++c.pred;
      if (span_of_head(pw, *pw[j]->head) == span_of_head(gw, *match->head)) {
        ++c.heads;
        if (pw[j]->deprel == match->deprel) ++c.labels;
      }
    }
  }
  return c;
}

inline Document perturb(const Document& gold, std::mt19937_64& rng, bool retokenize) {
  Document pred = gold;
  for (auto& s : pred.sentences) {
    const int n = static_cast<int>(s.word_count());
    for (auto& t : s.tokens) {
      if (t.is_range()) continue;
      if (rng() % 4 == 0) {
        int h;
        do h = static_cast<int>(rng() % static_cast<unsigned>(n + 1));
        while (h == t.id.first);
        t.head = h;
      }
      if (rng() % 4 == 0) t.deprel = sample_deprels()[rng() % sample_deprels().size()];
      if (rng() % 3 == 0) t.feats.set = random_feats(rng);
    }
    if (retokenize && n > 1 && rng() % 2) {
      const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
      try {
        s = treebank::join_tokens(s, k);
      } catch (const treebank::EditError&) {
        // a range covers only one of the pair; keep the tokenization
      }
    }
    if (retokenize && rng() % 2) {
      const int k = 1 + static_cast<int>(rng() % s.word_count());
      const auto form = s.word(k)->form;
      if (form.size() >= 2) s = treebank::split_token(s, k, form.substr(0, 1), form.substr(1));
    }
  }
  return pred;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("treebank-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testing_support
