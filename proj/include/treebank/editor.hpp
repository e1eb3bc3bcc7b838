#pragma once

// Token-level edits with automatic renumbering of IDs and HEADs.

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "treebank/conllu.hpp"

namespace treebank {

class EditError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::size_t require_word(const Sentence& s, TokenId id, const char* what) {
  if (id.is_range()) throw EditError(std::string(what) + ": " + id.str() + " is a multiword token, not a word");
  auto pos = s.position_of(id.first);
  if (pos == Sentence::npos) throw EditError(std::string(what) + ": no word with ID " + id.str());
  return pos;
}

inline bool is_feature_name(std::string_view name) {
  if (name.empty() || !std::isupper(static_cast<unsigned char>(name.front()))) return false;
  // all-caps names are column names (ID, DEPS), never features
  if (name.size() > 1 && std::all_of(name.begin(), name.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)); }))
    return false;
  std::size_t i = 0;
  while (i < name.size() && std::isalnum(static_cast<unsigned char>(name[i]))) ++i;
  if (i == name.size()) return true;
  if (name[i] != '[' || name.back() != ']' || i + 2 >= name.size()) return false;
  for (std::size_t j = i + 1; j + 1 < name.size(); ++j)
    if (!std::islower(static_cast<unsigned char>(name[j])) && !std::isdigit(static_cast<unsigned char>(name[j])))
      return false;
  return true;
}

/// True when word `a` is an ancestor of word `b`; stops after as many steps
/// as there are words, so cyclic input terminates.
inline bool dominates(const Sentence& s, int a, int b) {
  const auto words = s.words();
  int cur = b;
  for (std::size_t step = 0; step <= words.size(); ++step) {
    const Token* t = s.word(cur);
    if (!t || !t->head || *t->head <= 0) return false;
    cur = *t->head;
    if (cur == a) return true;
  }
  return false;
}

}  // namespace detail

/// Splits word `id` into `first` and `second`.
///
/// The first part keeps the word's annotation and its dependents; the second
/// part is inserted at id+1, attached to the first part as "dep" with empty
/// LEMMA/UPOS/XPOS/FEATS, and takes over the original MISC. Words after `id`
/// and HEADs pointing past it shift by one; ranges covering `id` grow by one.
/// Unless `allow_non_concatenative` is set, first+second must equal FORM.
inline Sentence split_token(Sentence s, TokenId id, const std::string& first, const std::string& second,
                            bool allow_non_concatenative = false) {
  auto pos = detail::require_word(s, id, "split");
  if (first.empty() || second.empty()) throw EditError("split: both parts need a non-empty form");
  const Token& original = s.tokens[pos];
  if (!allow_non_concatenative && first + second != original.form)
    throw EditError("split: '" + first + "' + '" + second + "' does not reproduce FORM '" + original.form + "'");

  const int k = id.first;
  for (auto& t : s.tokens) {
    if (t.is_range() && t.id.first <= k && k <= t.id.last) {
      ++t.id.last;
      continue;
    }
    if (t.id.first > k) {
      ++t.id.first;
      ++t.id.last;
    }
    if (t.head && *t.head > k) ++*t.head;
  }

  Token tail;
  tail.id = TokenId(k + 1);
  tail.form = second;
  tail.head = k;
  tail.deprel = "dep";
  tail.misc = std::move(s.tokens[pos].misc);

  Token& head_part = s.tokens[pos];
  head_part.form = first;
  head_part.misc.clear();

  s.tokens.insert(s.tokens.begin() + static_cast<std::ptrdiff_t>(pos) + 1, std::move(tail));
  return s;
}

/// Merges words `id` and `id`+1. The merged word takes the annotation of
/// whichever of the two is an ancestor of the other (the left one when
/// neither is),
/// the concatenated FORM and the right word's MISC. A multiword token that
/// covered exactly these two words is dropped.
inline Sentence join_tokens(Sentence s, TokenId id) {
  auto left_pos = detail::require_word(s, id, "join");
  const int k = id.first;
  auto right_pos = s.position_of(k + 1);
  if (right_pos == Sentence::npos) throw EditError("join: no word with ID " + std::to_string(k + 1));

  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& t = s.tokens[i];
    if (!t.is_range()) continue;
    bool has_left = t.id.first <= k && k <= t.id.last;
    bool has_right = t.id.first <= k + 1 && k + 1 <= t.id.last;
    if (has_left != has_right)
      throw EditError("join: multiword token " + t.id.str() + " covers only one of words " + std::to_string(k) +
                      " and " + std::to_string(k + 1));
  }

  const Token& left = s.tokens[left_pos];
  const Token& right = s.tokens[right_pos];
  // Inherit from whichever word dominates the other; unrelated words keep the left.
  const bool right_over_left = detail::dominates(s, k + 1, k);
  const bool left_over_right = detail::dominates(s, k, k + 1);
  Token merged = (right_over_left && !left_over_right) ? right : left;
  merged.form = left.form + right.form;
  merged.misc = right.misc;
  if (merged.head && (*merged.head == k || *merged.head == k + 1))
    throw EditError("join: words " + std::to_string(k) + " and " + std::to_string(k + 1) +
                    " head each other; merging would create a self-loop");
  merged.id = TokenId(k);

  s.tokens[left_pos] = std::move(merged);
  s.tokens.erase(s.tokens.begin() + static_cast<std::ptrdiff_t>(right_pos));

  std::erase_if(s.tokens, [k](const Token& t) { return t.is_range() && t.id.first == k && t.id.last == k + 1; });
  for (auto& t : s.tokens) {
    if (t.is_range()) {
      if (t.id.last >= k + 1) --t.id.last;
      if (t.id.first > k + 1) --t.id.first;
    } else if (t.id.first > k + 1) {
      --t.id.first;
      --t.id.last;
    }
    if (t.head && *t.head > k) --*t.head;
  }
  return s;
}

/// Sets one column (FORM, LEMMA, UPOS, XPOS, FEATS, HEAD, DEPREL, MISC) or,
/// for a feature name such as "Case", one FEATS entry. An empty value or "_"
/// clears. HEAD is range-checked here; cycles are left to the validator.
inline Sentence set_field(Sentence s, TokenId id, std::string_view field, const std::string& value) {
  std::size_t pos = Sentence::npos;
  if (id.is_range()) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i)
      if (s.tokens[i].id == id) pos = i;
    if (pos == Sentence::npos) throw EditError("set_field: no multiword token " + id.str());
    if (field != "FORM" && field != "MISC")
      throw EditError("set_field: only FORM and MISC are editable on multiword token " + id.str());
  } else {
    pos = detail::require_word(s, id, "set_field");
  }
  Token& t = s.tokens[pos];
  const std::string v = value == "_" ? std::string() : value;
  if (v.find_first_of("\t\r\n") != std::string::npos) throw EditError("set_field: value contains a tab or line break");

  if (field == "FORM") {
    t.form = v;
  } else if (field == "LEMMA") {
    t.lemma = v;
  } else if (field == "UPOS") {
    t.upos = v;
  } else if (field == "XPOS") {
    t.xpos = v;
  } else if (field == "DEPREL") {
    t.deprel = v;
  } else if (field == "MISC") {
    t.misc = v.empty() ? std::vector<std::string>{} : detail::split(v, '|');
    for (const auto& item : t.misc)
      if (item.empty()) throw EditError("set_field: empty MISC item in '" + v + "'");
  } else if (field == "FEATS") {
    try {
      t.feats = FeatsField{v.empty() ? FeatureSet{} : parse_feats(v), std::nullopt};
    } catch (const FormatError& e) {
      throw EditError(std::string("set_field: ") + e.what());
    }
  } else if (field == "HEAD") {
    if (v.empty()) {
      t.head.reset();
    } else {
      auto h = detail::to_int(v);
      const int n = static_cast<int>(s.word_count());
      if (!h) throw EditError("set_field: HEAD '" + v + "' is not a number");
      if (*h > n) throw EditError("set_field: HEAD " + v + " outside 0.." + std::to_string(n));
      if (*h == id.first) throw EditError("set_field: HEAD of word " + id.str() + " cannot point at itself");
      t.head = *h;
    }
  } else if (detail::is_feature_name(field)) {
    if (t.feats.malformed) throw EditError("set_field: FEATS of word " + id.str() + " is malformed; set FEATS first");
    try {
      if (v.empty()) {
        t.feats.set.erase(field);
      } else {
        t.feats.set.set(std::string(field), v);
      }
    } catch (const FormatError& e) {
      throw EditError(std::string("set_field: ") + e.what());
    }
  } else {
    throw EditError("set_field: unknown field '" + std::string(field) + "'");
  }
  return s;
}

}  // namespace treebank
