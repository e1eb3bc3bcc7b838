#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "treebank/conllu.hpp"

namespace treebank {

/// Allowed vocabulary for validation. An empty feature whitelist means
/// any well-formed feature is accepted.
struct Schema {
  std::set<std::string> upos;
  std::set<std::string> deprels;
  // name -> allowed values; an empty value set allows any value
  std::map<std::string, std::set<std::string>> features;

  static Schema defaults();
};

inline const std::vector<std::string>& universal_upos() {
  static const std::vector<std::string> tags = {"ADJ",  "ADP",  "ADV",  "AUX",   "CCONJ", "DET",
                                                "INTJ", "NOUN", "NUM",  "PART",  "PRON",  "PROPN",
                                                "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return tags;
}

/// The 42 relation labels used in the BOUN treebank.
inline const std::vector<std::string>& boun_deprels() {
  static const std::vector<std::string> labels = {
      "acl",       "advcl",       "advcl:cond", "advmod",    "advmod:emph", "amod",      "appos",
      "aux",       "aux:q",       "case",       "cc",        "cc:preconj",  "ccomp",     "clf",
      "compound",  "compound:lvc", "compound:redup", "conj", "cop",         "csubj",     "dep",
      "det",       "discourse",   "dislocated", "fixed",     "flat",        "goeswith",  "iobj",
      "list",      "mark",        "nmod",       "nmod:poss", "nsubj",       "nummod",    "obj",
      "obl",       "orphan",      "parataxis",  "punct",     "root",        "vocative",  "xcomp"};
  return labels;
}

inline Schema Schema::defaults() {
  Schema s;
  s.upos.insert(universal_upos().begin(), universal_upos().end());
  s.deprels.insert(boun_deprels().begin(), boun_deprels().end());
  return s;
}

/// Reads a schema file:
///
///   # comment
///   [upos]
///   NOUN
///   [deprel]
///   root
///   [features]
///   Case=Acc
///   Number          (any value)
///
/// Sections that are absent keep their defaults.
inline Schema load_schema(std::istream& in) {
  Schema out = Schema::defaults();
  std::set<std::string> seen;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto entry = detail::trim(line);
    if (!entry.empty() && entry.back() == '\r') entry.pop_back();
    if (entry.empty() || entry.front() == '#') continue;
    if (entry.front() == '[') {
      if (entry.back() != ']') throw ParseError(lineno, line, "unterminated section header");
      section = entry.substr(1, entry.size() - 2);
      if (section != "upos" && section != "deprel" && section != "features")
        throw ParseError(lineno, line, "unknown schema section");
      if (seen.insert(section).second) {
        if (section == "upos") out.upos.clear();
        if (section == "deprel") out.deprels.clear();
        if (section == "features") out.features.clear();
      }
      continue;
    }
    if (section.empty()) throw ParseError(lineno, line, "entry outside of a section");
    if (section == "upos") {
      out.upos.insert(entry);
    } else if (section == "deprel") {
      out.deprels.insert(entry);
    } else {
      auto eq = entry.find('=');
      if (eq == std::string::npos) {
        out.features[entry];
      } else {
        out.features[entry.substr(0, eq)].insert(entry.substr(eq + 1));
      }
    }
  }
  if (out.upos.empty()) throw ParseError(0, {}, "schema has an empty [upos] section");
  if (!out.deprels.count("root") || !out.deprels.count("punct"))
    throw ParseError(0, {}, "schema [deprel] section must contain 'root' and 'punct'");
  return out;
}

inline Schema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file '" + path + "'");
  return load_schema(in);
}

enum class IssueCode {
  IdSequence,
  Root,
  HeadRange,
  Cycle,
  UnknownUpos,
  UnknownDeprel,
  InvalidFeats,
  RangeToken,
  DuplicateSentId,
};

inline const char* to_string(IssueCode code) {
  switch (code) {
    case IssueCode::IdSequence: return "id-sequence";
    case IssueCode::Root: return "root";
    case IssueCode::HeadRange: return "head-range";
    case IssueCode::Cycle: return "cycle";
    case IssueCode::UnknownUpos: return "upos";
    case IssueCode::UnknownDeprel: return "deprel";
    case IssueCode::InvalidFeats: return "feats";
    case IssueCode::RangeToken: return "range-token";
    case IssueCode::DuplicateSentId: return "duplicate-sent-id";
  }
  return "unknown";
}

struct ValidationIssue {
  std::size_t sentence_index = 0;
  std::optional<std::string> sent_id;
  std::optional<TokenId> token;
  IssueCode code;
  std::string message;

  /// "sent_id" when present, otherwise "#<index>".
  std::string sentence_ref() const { return sent_id ? *sent_id : "#" + std::to_string(sentence_index); }
  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

namespace detail {

class IssueSink {
public:
  IssueSink(const Sentence& s, std::size_t index) : index_(index), sent_id_(s.sent_id()) {}

  void add(IssueCode code, std::optional<TokenId> token, std::string message) {
    issues_.push_back({index_, sent_id_, token, code, std::move(message)});
  }
  std::vector<ValidationIssue> take() { return std::move(issues_); }

private:
  std::size_t index_;
  std::optional<std::string> sent_id_;
  std::vector<ValidationIssue> issues_;
};

inline bool feats_allowed(const Schema& schema, const FeatureSet& feats, std::string& bad) {
  if (schema.features.empty()) return true;
  for (const auto& [name, value] : feats) {
    auto it = schema.features.find(name);
    if (it == schema.features.end() || (!it->second.empty() && !it->second.count(value))) {
      bad = name + "=" + value;
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Checks one sentence against the structural and vocabulary rules. Issues are
/// ordered by token id; issues not tied to a token come first.
inline std::vector<ValidationIssue> validate_sentence(const Sentence& s, const Schema& schema,
                                                      std::size_t sentence_index = 0) {
  detail::IssueSink sink(s, sentence_index);
  const auto words = s.words();
  const int n = static_cast<int>(words.size());

  bool ids_ok = true;
  for (int i = 0; i < n; ++i) {
    if (words[i]->id.first != i + 1) {
      sink.add(IssueCode::IdSequence, words[i]->id,
               "word ID " + words[i]->id.str() + " out of sequence, expected " + std::to_string(i + 1));
      ids_ok = false;
      break;
    }
  }

  bool heads_ok = true;
  std::vector<int> roots;
  for (const auto& t : s.tokens) {
    if (t.is_range()) {
      if (t.id.first < 1 || t.id.last > n)
        sink.add(IssueCode::IdSequence, t.id, "range " + t.id.str() + " spans words that do not exist");
      if (t.head || !t.deprel.empty() || !t.feats.empty())
        sink.add(IssueCode::RangeToken, t.id, "multiword token " + t.id.str() + " must have empty HEAD, DEPREL and FEATS");
      continue;
    }
    if (!t.head) {
      sink.add(IssueCode::HeadRange, t.id, "missing HEAD");
      heads_ok = false;
    } else if (*t.head == t.id.first) {
      sink.add(IssueCode::HeadRange, t.id, "HEAD points at the word itself");
      heads_ok = false;
    } else if (*t.head < 0 || *t.head > n) {
      sink.add(IssueCode::HeadRange, t.id, "HEAD " + std::to_string(*t.head) + " outside 0.." + std::to_string(n));
      heads_ok = false;
    } else if (*t.head == 0) {
      roots.push_back(t.id.first);
    }
    if (t.upos.empty()) {
      sink.add(IssueCode::UnknownUpos, t.id, "missing UPOS value");
    } else if (!schema.upos.count(t.upos)) {
      sink.add(IssueCode::UnknownUpos, t.id, "unknown UPOS value '" + t.upos + "'");
    }
    if (t.deprel.empty()) {
      sink.add(IssueCode::UnknownDeprel, t.id, "missing DEPREL value");
    } else if (!schema.deprels.count(t.deprel)) {
      sink.add(IssueCode::UnknownDeprel, t.id, "unknown DEPREL value '" + t.deprel + "'");
    }
    std::string bad;
    if (t.feats.malformed) {
      std::string why;
      try {
        parse_feats(*t.feats.malformed);
      } catch (const FormatError& e) {
        why = e.what();
      }
      sink.add(IssueCode::InvalidFeats, t.id, "malformed FEATS: " + why);
    } else if (!detail::feats_allowed(schema, t.feats.set, bad)) {
      sink.add(IssueCode::InvalidFeats, t.id, "feature '" + bad + "' not allowed by schema");
    }
    if (t.deprel == "root" && t.head && *t.head != 0)
      sink.add(IssueCode::Root, t.id, "DEPREL root on a word whose HEAD is not 0");
  }

  if (n > 0) {
    if (roots.empty() && heads_ok) {
      sink.add(IssueCode::Root, std::nullopt, "no word attached to the root (HEAD 0)");
    } else if (roots.size() > 1) {
      sink.add(IssueCode::Root, TokenId(roots[1]), std::to_string(roots.size()) + " words attached to the root (HEAD 0)");
    }
    for (int r : roots) {
      const Token* t = s.word(r);
      if (t && t->deprel != "root")
        sink.add(IssueCode::Root, t->id, "word attached to HEAD 0 must have DEPREL root, found '" + t->deprel + "'");
    }
  }

  // Cycle detection needs a well-formed head vector.
  if (ids_ok && heads_ok && n > 0) {
    // 0 = unvisited, 1 = on current path, 2 = reaches root
    std::vector<int> state(n + 1, 0);
    state[0] = 2;
    for (int start = 1; start <= n; ++start) {
      std::vector<int> path;
      int cur = start;
      while (state[cur] == 0) {
        state[cur] = 1;
        path.push_back(cur);
        cur = *words[cur - 1]->head;
      }
      if (state[cur] == 1) {
        // cur closes a new cycle; report its smallest member
        int smallest = cur;
        for (int v = *words[cur - 1]->head; v != cur; v = *words[v - 1]->head) smallest = std::min(smallest, v);
        sink.add(IssueCode::Cycle, TokenId(smallest),
                 "cycle through word " + std::to_string(smallest) + ": words not reachable from the root");
      }
      // Everything on the path is now resolved (either reaches the root or
      // feeds a cycle that was already reported).
      const int resolved = state[cur] == 2 ? 2 : 3;
      for (int v : path) state[v] = resolved;
    }
  }

  auto issues = sink.take();
  std::stable_sort(issues.begin(), issues.end(), [](const ValidationIssue& a, const ValidationIssue& b) {
    return (a.token ? a.token->first : 0) < (b.token ? b.token->first : 0);
  });
  return issues;
}

/// Per-sentence issues in document order followed by duplicate sent_id
/// issues, each attached to the later duplicate's position in the sort.
inline std::vector<ValidationIssue> validate_document(const Document& d, const Schema& schema) {
  std::vector<ValidationIssue> out;
  std::map<std::string, std::size_t> first_seen;
  for (std::size_t i = 0; i < d.sentences.size(); ++i) {
    const auto& s = d.sentences[i];
    auto issues = validate_sentence(s, schema, i);
    if (auto id = s.sent_id()) {
      auto [it, inserted] = first_seen.emplace(*id, i);
      if (!inserted)
        issues.insert(issues.begin(), ValidationIssue{i, id, std::nullopt, IssueCode::DuplicateSentId,
                                                      "duplicate sent_id '" + *id + "' (first used by sentence #" +
                                                          std::to_string(it->second) + ")"});
    }
    out.insert(out.end(), std::make_move_iterator(issues.begin()), std::make_move_iterator(issues.end()));
  }
  return out;
}

}  // namespace treebank
