#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "treebank/morphconv.hpp"

using namespace treebank;
using namespace treebank::morph;

namespace {

struct Row {
  std::string tag, printed;
};

std::vector<Row> table_rows() {
  std::ifstream in(std::string(TREEBANK_TEST_DATA) + "/morph_table.tsv");
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    if (tab != std::string::npos) rows.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return rows;
}

// Canonical FEATS of a printed cell, sorted by a hand-written comparator.
std::string canonical(const std::string& printed) {
  std::vector<std::string> pairs;
  std::string cur;
  for (char c : printed + "|") {
    if (c == ' ') continue;
    if (c == '|') {
      pairs.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  auto key = [](const std::string& p) {
    std::string k = p.substr(0, p.find('='));
    for (auto& ch : k) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return k;
  };
  std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::string out;
  for (const auto& p : pairs) out += (out.empty() ? "" : "|") + p;
  return out;
}

}  // namespace

TEST(Morph, TableHasEveryPrintedRow) {
  const auto rows = table_rows();
  ASSERT_EQ(rows.size(), 59u);
  ASSERT_EQ(conversion_rules().size(), rows.size());
  for (const auto& r : rows) {
    auto it = std::find_if(conversion_rules().begin(), conversion_rules().end(),
                           [&](const ConversionRule& c) { return c.sak_tag == r.tag; });
    ASSERT_NE(it, conversion_rules().end()) << r.tag;
    EXPECT_EQ(it->ud_features, r.printed) << r.tag;
  }
}

TEST(Morph, EveryRowConvertsAsPrinted) {
  for (const auto& r : table_rows()) {
    auto c = convert_analysis("kök[Noun]+[" + r.tag + "]");
    EXPECT_EQ(c.feats.str(), canonical(r.printed)) << r.tag;
  }
}

TEST(Morph, ImperativeVerbFromTheAmbiguityTable) {
  auto c = convert_analysis("alın[Verb]+[Pos]+[Imp]+[A2sg]");
  EXPECT_EQ(c.upos, "VERB");
  EXPECT_EQ(c.lemma, "alın");
  EXPECT_EQ(c.feats.str(), "Mood=Imp|Number=Sing|Person=2|Polarity=Pos");
}

TEST(Morph, OtherAnalysesOfTheSameSurfaceWord) {
  auto noun = convert_analysis("alın[Noun]+[A3sg]+[Pnon]+[Nom]");
  EXPECT_EQ(noun.upos, "NOUN");
  EXPECT_EQ(noun.feats.str(), "Case=Nom|Number=Sing|Person=3");

  auto poss = convert_analysis("al[Noun]+[A3sg]+Hn[P2sg]+[Nom]");
  EXPECT_EQ(poss.feats.str(), "Case=Nom|Number=Sing|Number[psor]=Sing|Person=3|Person[psor]=2");

  auto derived = convert_analysis("al[Adj]&[Noun]+[A3sg]+[Pnon]+NHn[Gen]");
  EXPECT_EQ(derived.upos, "NOUN");
  EXPECT_EQ(derived.lemma, "al");
  EXPECT_EQ(derived.feats.str(), "Case=Gen|Number=Sing|Person=3");

  auto passive = convert_analysis("al[Verb]&Hn[Verb+Pass]+[Pos]+[Imp]+[A2sg]");
  EXPECT_EQ(passive.upos, "VERB");
  EXPECT_EQ(passive.lemma, "alHn");
  EXPECT_EQ(passive.feats.str(), "Mood=Imp|Number=Sing|Person=2|Polarity=Pos|Voice=Pass");

  auto honorific = convert_analysis("al[Verb]+[Pos]+[Imp]+YHn[A2pl]");
  EXPECT_EQ(honorific.feats.str(), "Mood=Imp|Number=Plur|Person=2|Polarity=Pos");
}

TEST(Morph, RightmostMorphemeWinsConflicts) {
  // Narr then Past: Evident from Past (Fh) wins, Tense agrees
  auto c = convert_analysis("gel[Verb]+[Pos]+mHş[Narr]+DH[Past]+[A3sg]");
  EXPECT_EQ(c.feats.get("Evident"), "Fh");
  EXPECT_EQ(c.feats.get("Tense"), "Past");
  auto d = convert_analysis("gel[Verb]+[Pos]+DH[Past]+mHş[Narr]+[A3sg]");
  EXPECT_EQ(d.feats.get("Evident"), "Nfh");

  EXPECT_EQ(resolve_conflicts({FeatureSet{{"Case", "Nom"}}, FeatureSet{{"Case", "Acc"}, {"Number", "Sing"}}}).str(),
            "Case=Acc|Number=Sing");
}

TEST(Morph, PronounTypesSetUpos) {
  auto c = convert_analysis("bu[Pron+DemonsP]+[A3sg]+[Pnon]+[Nom]");
  EXPECT_EQ(c.upos, "PRON");
  EXPECT_EQ(c.feats.str(), "Case=Nom|Number=Sing|Person=3|PronType=Dem");
}

TEST(Morph, UnknownTagsFailOrAreDropped) {
  EXPECT_THROW(convert_analysis("ev[Noun]+[Zzz]"), ConversionError);
  ConversionOptions lenient;
  lenient.drop_unknown = true;
  auto c = convert_analysis("ev[Noun]+[Zzz]+[A3sg]", lenient);
  EXPECT_EQ(c.dropped, std::vector<std::string>{"Zzz"});
  EXPECT_EQ(c.feats.str(), "Number=Sing|Person=3");
}

TEST(Morph, MalformedAnalyses) {
  for (const char* bad : {"ev", "[Noun]", "ev[Noun", "ev[Noun]+A3sg", "ev[Noun]x[A3sg]", "ev[]"})
    EXPECT_THROW(convert_analysis(bad), ConversionError) << bad;
}

TEST(Morph, UposMapOverrides) {
  std::istringstream in("# custom\nNoun PROPN\n");
  ConversionOptions opts;
  opts.upos_map = load_upos_map(in);
  EXPECT_EQ(convert_analysis("Ali[Noun]+[A3sg]", opts).upos, "PROPN");
  EXPECT_EQ(convert_analysis("gel[Verb]+[Pos]", opts).upos, "VERB");
  std::istringstream bad("Noun\n");
  EXPECT_THROW(load_upos_map(bad), ParseError);
}

TEST(Morph, StreamConversion) {
  std::istringstream in("alın[Verb]+[Pos]+[Imp]+[A2sg]\n\nev[Noun]+[Zzz]\r\n");
  std::ostringstream out;
  auto r = convert_stream(in, out);
  EXPECT_EQ(r.converted, 1u);
  EXPECT_EQ(r.failed, 1u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_NE(r.diagnostics[0].find("line 3"), std::string::npos);
  EXPECT_EQ(out.str(), "alın\tVERB\tMood=Imp|Number=Sing|Person=2|Polarity=Pos\n\n_\t_\t_\n");
}
