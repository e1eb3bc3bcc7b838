#pragma once

// Conversion of two-level morphological analyses ("alın[Verb]+[Pos]+[Imp]+[A2sg]")
// into UD lemma, UPOS and FEATS.

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treebank/conllu.hpp"

namespace treebank::morph {

class ConversionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class MorphemeKind { Inflectional, Derivational };

struct Morpheme {
  MorphemeKind kind = MorphemeKind::Inflectional;
  std::string surface;            // may be empty (zero morph)
  std::vector<std::string> tags;  // bracket content split on '+'
  friend bool operator==(const Morpheme&, const Morpheme&) = default;
};

struct SakAnalysis {
  std::string root;
  std::vector<std::string> root_tags;  // first entry is the root category
  std::vector<Morpheme> segments;

  const std::string& root_category() const { return root_tags.front(); }
  friend bool operator==(const SakAnalysis&, const SakAnalysis&) = default;
};

struct ConversionRule {
  std::string sak_tag;
  std::string ud_features;  // as printed in the mapping table
};

/// Tag -> UD feature mapping table.
inline const std::vector<ConversionRule>& conversion_rules() {
  static const std::vector<ConversionRule> rules = {
      {"A1sg", "Number=Sing| Person=1"},
      {"A2sg", "Number=Sing| Person=2"},
      {"A3sg", "Number=Sing| Person=3"},
      {"A1pl", "Number=Plur| Person=1"},
      {"A2pl", "Number=Plur| Person=2"},
      {"A3pl", "Number=Plur| Person=3"},
      {"P1sg", "Number[psor]=Sing| Person[psor]=1"},
      {"P2sg", "Number[psor]=Sing| Person[psor]=2"},
      {"P3sg", "Number[psor]=Sing| Person[psor]=3"},
      {"P1pl", "Number[psor]=Plur| Person[psor]=1"},
      {"P2pl", "Number[psor]=Plur| Person[psor]=2"},
      {"P3pl", "Number[psor]=Plur| Person[psor]=3"},
      {"Abl", "Case=Abl"},
      {"Acc", "Case=Acc"},
      {"Dat", "Case=Dat"},
      {"Equ", "Case=Equ"},
      {"Gen", "Case=Gen"},
      {"Ins", "Case=Ins"},
      {"Loc", "Case=Loc"},
      {"Nom", "Case=Nom"},
      {"Pass", "Voice=Pass"},
      {"Caus", "Voice=Cau"},
      {"Reflex", "Voice=Rfl"},
      {"Recip", "Voice=Rcp"},
      {"Able", "Mood=Abil"},
      {"Repeat", "Mood=Iter"},
      {"Hastily", "Mood=Rapid"},
      {"Almost", "Mood=Pro"},
      {"Stay", "Mood=Dur"},
      {"While", "VerbForm=Conv| Mood=Imp"},
      {"ByDoingSo", "VerbForm=Conv| Mood=Imp"},
      {"Pos", "Polarity=Pos"},
      {"Neg", "Polarity=Neg"},
      {"Past", "Aspect=Perf| Tense=Past| Evident=Fh"},
      {"Narr", "Tense=Past| Evident=Nfh"},
      {"Fut", "Tense=Fut| Aspect=Imp"},
      {"Aor", "Tense=Aor| Aspect=Hab"},
      {"Pres", "Tense=Pres| Aspect=Imp"},
      {"Desr", "Mood=Des"},
      {"Cond", "Mood=Cnd"},
      {"Neces", "Mood=Nec"},
      {"Opt", "Mood=Opt"},
      {"Imp", "Mood=Imp"},
      {"Prog1", "Aspect=Prog| Tense=Pres"},
      {"Prog2", "Aspect=Prog| Tense=Pres"},
      {"DemonsP", "PronType=Dem"},
      {"QuesP", "PronType=Ind"},
      {"ReflexP", "PronType=Prs| Reflex=Yes"},
      {"PersP", "PronType=Prs"},
      {"QuantP", "PronType=Ind"},
      {"Card", "NumType=Card"},
      {"Ord", "NumType=Ord"},
      {"Distrib", "NumType=Dist"},
      {"Ratio", "NumType=Frac"},
      {"Range", "NumType=Range"},
      {"Inf", "VerbForm=Vnoun"},
      {"FutPart", "VerbForm=Part| Tense=Future| Aspect=Imp"},
      {"PastPart", "VerbForm=Part| Tense=Past| Aspect=Perf"},
      {"PresPart", "VerbForm=Part| Tense=Pres"},
  };
  return rules;
}

/// Parses the printed right-hand side ("Number=Sing| Person=1").
inline FeatureSet rule_features(std::string_view printed) {
  std::string compact;
  for (char c : printed)
    if (c != ' ') compact += c;
  return parse_feats(compact);
}

/// Category tag -> UPOS. Tags not listed map to X.
inline std::map<std::string, std::string> default_upos_map() {
  return {{"Noun", "NOUN"},  {"Verb", "VERB"},    {"Adj", "ADJ"},     {"Adverb", "ADV"},
          {"Pron", "PRON"},  {"Pers", "PRON"},    {"DemonsP", "PRON"}, {"QuesP", "PRON"},
          {"ReflexP", "PRON"}, {"PersP", "PRON"}, {"QuantP", "PRON"}, {"Punc", "PUNCT"}};
}

/// Tags that name a category; they carry no features of their own.
inline const std::set<std::string>& category_tags() {
  static const std::set<std::string> tags = {"Noun", "Verb",  "Adj",    "Adverb", "Pron", "Pers", "Num",
                                             "Det",  "Postp", "Conj",   "Interj", "Ques", "Punc", "Dup"};
  return tags;
}

/// Zero-marked tags with no UD counterpart.
inline const std::set<std::string>& passthrough_tags() {
  static const std::set<std::string> tags = {"Pnon"};
  return tags;
}

/// Pronoun-type tags select PRON as well as adding PronType.
inline bool is_pronoun_type(std::string_view tag) {
  return tag == "DemonsP" || tag == "QuesP" || tag == "ReflexP" || tag == "PersP" || tag == "QuantP";
}

namespace detail {

inline std::vector<std::string> bracket_tags(std::string_view content, std::string_view line) {
  std::vector<std::string> tags;
  for (auto& t : treebank::detail::split(content, '+')) {
    auto tag = treebank::detail::trim(t);
    if (tag.empty()) throw ConversionError("empty tag in '" + std::string(line) + "'");
    tags.push_back(std::move(tag));
  }
  return tags;
}

}  // namespace detail

/// Reads one analysis: root "[Cat]" followed by "+surface[Tag]" (inflectional)
/// or "&surface[Tag]" (derivational) items. Whitespace between items is ignored.
inline SakAnalysis parse_analysis(std::string_view line) {
  SakAnalysis a;
  std::size_t i = line.find('[');
  if (i == std::string_view::npos) throw ConversionError("missing root category in '" + std::string(line) + "'");
  a.root = treebank::detail::trim(line.substr(0, i));
  if (a.root.empty()) throw ConversionError("empty root in '" + std::string(line) + "'");

  auto read_bracket = [&](std::size_t open) {
    auto close = line.find(']', open);
    if (close == std::string_view::npos) throw ConversionError("unterminated '[' in '" + std::string(line) + "'");
    auto tags = detail::bracket_tags(line.substr(open + 1, close - open - 1), line);
    i = close + 1;
    return tags;
  };

  a.root_tags = read_bracket(i);
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c != '+' && c != '&')
      throw ConversionError("expected '+' or '&' at offset " + std::to_string(i) + " in '" + std::string(line) + "'");
    Morpheme m;
    m.kind = c == '&' ? MorphemeKind::Derivational : MorphemeKind::Inflectional;
    auto open = line.find('[', i + 1);
    if (open == std::string_view::npos) throw ConversionError("morpheme without [tag] in '" + std::string(line) + "'");
    m.surface = treebank::detail::trim(line.substr(i + 1, open - i - 1));
    m.tags = read_bracket(open);
    a.segments.push_back(std::move(m));
  }
  return a;
}

/// Merges feature fragments in morpheme order; on conflicting values the
/// rightmost morpheme wins.
inline FeatureSet resolve_conflicts(const std::vector<FeatureSet>& fragments) {
  FeatureSet out;
  for (const auto& frag : fragments)
    for (const auto& [name, value] : frag) out.set(name, value);
  return out;
}

struct ConversionOptions {
  bool drop_unknown = false;
  std::map<std::string, std::string> upos_map = default_upos_map();
};

struct Conversion {
  std::string lemma;
  std::string upos;
  FeatureSet feats;
  std::vector<std::string> dropped;  // unknown tags skipped in fallback mode
};

/// Converts one analysis. FEATS come only from the last derivational
/// boundary onward (the final word); the lemma is the stem that boundary
/// produces.
inline Conversion convert_analysis(const SakAnalysis& a, const ConversionOptions& options = {}) {
  static const auto table = [] {
    std::map<std::string, FeatureSet> m;
    for (const auto& r : conversion_rules()) m.emplace(r.sak_tag, rule_features(r.ud_features));
    return m;
  }();

  Conversion out;
  std::size_t word_start = 0;  // index into segments of the last '&'
  bool derived = false;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    if (a.segments[i].kind == MorphemeKind::Derivational) {
      word_start = i;
      derived = true;
    }
  }

  std::string category;
  std::vector<FeatureSet> fragments;
  auto consume = [&](const std::string& tag, bool in_final_word) {
    bool known = false;
    if (auto it = table.find(tag); it != table.end()) {
      if (in_final_word) fragments.push_back(it->second);
      known = true;
    }
    if (category_tags().count(tag) || is_pronoun_type(tag)) {
      category = tag;
      known = true;
    }
    if (passthrough_tags().count(tag)) known = true;
    if (!known) {
      if (!options.drop_unknown) throw ConversionError("unknown tag '" + tag + "'");
      out.dropped.push_back(tag);
    }
  };

  for (const auto& tag : a.root_tags) consume(tag, !derived);
  out.lemma = a.root;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const bool in_final_word = !derived || i >= word_start;
    for (const auto& tag : a.segments[i].tags) consume(tag, in_final_word);
    if (derived && i <= word_start) out.lemma += a.segments[i].surface;
  }

  auto it = options.upos_map.find(category);
  out.upos = it == options.upos_map.end() ? "X" : it->second;
  out.feats = resolve_conflicts(fragments);
  return out;
}

inline Conversion convert_analysis(std::string_view line, const ConversionOptions& options = {}) {
  return convert_analysis(parse_analysis(line), options);
}

/// Reads "Cat UPOS" pairs (whitespace separated, '#' comments) on top of
/// the default map.
inline std::map<std::string, std::string> load_upos_map(std::istream& in) {
  auto out = default_upos_map();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string cat, upos, extra;
    if (!(fields >> cat) || cat.front() == '#') continue;
    if (!(fields >> upos) || (fields >> extra)) throw ParseError(lineno, line, "expected 'Category UPOS'");
    out[cat] = upos;
  }
  return out;
}

struct BatchResult {
  std::size_t converted = 0;
  std::size_t failed = 0;
  std::vector<std::string> diagnostics;
};

/// One analysis per input line -> "lemma<TAB>upos<TAB>feats" per output line.
/// Blank input lines are copied through. A line that fails to convert
/// produces "_\t_\t_" and a diagnostic.
inline BatchResult convert_stream(std::istream& in, std::ostream& out, const ConversionOptions& options = {}) {
  BatchResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (treebank::detail::trim(line).empty()) {
      out << '\n';
      continue;
    }
    try {
      auto c = convert_analysis(line, options);
      out << c.lemma << '\t' << c.upos << '\t' << c.feats.str() << '\n';
      ++result.converted;
      for (const auto& tag : c.dropped)
        result.diagnostics.push_back("line " + std::to_string(lineno) + ": warning: dropped unknown tag '" + tag + "'");
    } catch (const ConversionError& e) {
      out << "_\t_\t_\n";
      ++result.failed;
      result.diagnostics.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return result;
}

}  // namespace treebank::morph
