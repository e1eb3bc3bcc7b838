#include <gtest/gtest.h>

#include <atomic>
#include <sstream>
#include <thread>

#include "support.hpp"
#include "treebank/service.hpp"

using namespace treebank;
using namespace treebank::service;
using testing_support::TempDir;

namespace {

const std::string kThree = std::string(testing_support::kIns167) +
                           "# sent_id = ins_168\n"
                           "1\tGeldi\tgel\tVERB\t_\tTense=Past\t0\troot\t_\tSpaceAfter=No\n"
                           "2\t.\t.\tPUNCT\t_\t_\t1\tpunct\t_\t_\n"
                           "\n"
                           "1\tEvet\tevet\tINTJ\t_\t_\t0\troot\t_\t_\n"
                           "\n";

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Session, OpenAndSummary) {
  TempDir dir;
  Session s(dir.file("a.conllu", kThree));
  auto sum = s.summary();
  EXPECT_EQ(sum.sentence_count, 3u);
  EXPECT_EQ(sum.revision, 0u);
  EXPECT_FALSE(sum.dirty);
}

TEST(Session, OpenErrors) {
  TempDir dir;
  EXPECT_THROW(Session((dir.path() / "missing.conllu").string()), IoError);
  try {
    Session s(dir.file("bad.conllu", "1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n2\tb\t_\tX\n"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  Session empty(dir.file("empty.conllu", ""));
  EXPECT_THROW(empty.get_sentence("0"), NotFound);
}

TEST(Session, GetBySentIdOrIndex) {
  TempDir dir;
  Session s(dir.file("a.conllu", kThree));
  auto p = s.get_sentence("ins_167");
  EXPECT_EQ(p.index, 0u);
  EXPECT_EQ(p.sentence.tokens.size(), 7u);
  EXPECT_TRUE(p.issues.empty());
  EXPECT_EQ(s.get_sentence("2").sentence.tokens[0].form, "Evet");
  EXPECT_THROW(s.get_sentence("3"), NotFound);
  EXPECT_THROW(s.get_sentence("nope"), NotFound);
}

TEST(Session, EditBumpsRevisionAndRevalidates) {
  TempDir dir;
  Session s(dir.file("a.conllu", kThree));
  auto p = s.apply_edit("ins_167", Edit::set(3, "UPOS", "NOUNX"), 0);
  EXPECT_EQ(p.revision, 1u);
  ASSERT_EQ(p.issues.size(), 1u);
  EXPECT_NE(p.issues[0].message.find("unknown UPOS value"), std::string::npos);
  EXPECT_TRUE(s.summary().dirty);
  EXPECT_EQ(s.get_sentence("ins_167").revision, 1u);
}

TEST(Session, StaleRevisionIsRejectedWithoutChange) {
  TempDir dir;
  Session s(dir.file("a.conllu", kThree));
  s.apply_edit("ins_167", Edit::set(1, "LEMMA", "sözcük"), 0);
  try {
    s.apply_edit("ins_167", Edit::set(1, "LEMMA", "x"), 0);
    FAIL();
  } catch (const RevisionConflict& e) {
    EXPECT_EQ(e.current(), 1u);
  }
  EXPECT_EQ(s.get_sentence("ins_167").sentence.tokens[0].lemma, "sözcük");
  EXPECT_EQ(s.revision(), 1u);
}

TEST(Session, FailedEditLeavesRevision) {
  TempDir dir;
  Session s(dir.file("a.conllu", kThree));
  EXPECT_THROW(s.apply_edit("ins_167", Edit::set(1, "HEAD", "1"), 0), EditError);
  EXPECT_EQ(s.revision(), 0u);
  EXPECT_FALSE(s.summary().dirty);
}

TEST(Session, SplitThenJoinRestoresArcs) {
  TempDir dir;
  Session s(dir.file("a.conllu", kThree));
  const auto before = testing_support::arc_multiset(s.get_sentence("ins_167").sentence);
  auto p = s.apply_edit("ins_167", Edit::split(5, "bırak", "tım"), 0);
  EXPECT_EQ(p.sentence.word_count(), 8u);
  p = s.apply_edit("ins_167", Edit::join(5), 1);
  EXPECT_EQ(testing_support::arc_multiset(p.sentence), before);
  EXPECT_EQ(p.revision, 2u);
}

TEST(Session, SaveUnmodifiedWritesCanonicalForm) {
  TempDir dir;
  const auto path = dir.file("a.conllu", kThree);
  Session s(path);
  const auto bytes = s.save();
  const auto written = testing_support::read_file(path);
  EXPECT_EQ(written.size(), bytes);
  EXPECT_EQ(written, serialize_document(parse_document(kThree)));
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
}

// Textual diff oracle: one UPOS edit changes exactly one line.
TEST(Session, SaveAfterOneEditChangesOneLine) {
  TempDir dir;
  const auto canonical = serialize_document(parse_document(kThree));
  const auto path = dir.file("a.conllu", canonical);
  Session s(path);
  s.apply_edit("ins_168", Edit::set(1, "UPOS", "AUX"), 0);
  s.save();
  EXPECT_FALSE(s.summary().dirty);
  auto a = lines(canonical), b = lines(testing_support::read_file(path));
  ASSERT_EQ(a.size(), b.size());
  std::vector<std::size_t> differing;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) differing.push_back(i);
  ASSERT_EQ(differing.size(), 1u);
  EXPECT_EQ(b[differing[0]], "1\tGeldi\tgel\tAUX\t_\tTense=Past\t0\troot\t_\tSpaceAfter=No");
}

TEST(Session, NotesPersistAcrossRestart) {
  TempDir dir;
  const auto path = dir.file("a.conllu", kThree);
  {
    Session s(path);
    s.set_note("ins_167", "check obl");
    s.set_note("2", "tab\there\nand a newline \\ backslash");
    s.apply_edit("ins_167", Edit::set(4, "DEPREL", "nmod"), 0);
    s.save();
  }
  Session s(path);
  EXPECT_EQ(s.get_note("ins_167"), "check obl");
  EXPECT_EQ(s.get_sentence("ins_167").note, "check obl");
  EXPECT_EQ(s.get_note("2"), "tab\there\nand a newline \\ backslash");
  EXPECT_FALSE(s.get_note("ins_168"));
  EXPECT_EQ(s.get_sentence("ins_167").sentence.tokens[3].deprel, "nmod");
  s.set_note("ins_167", "");
  Session again(path);
  EXPECT_FALSE(again.get_note("ins_167"));
  EXPECT_THROW(again.set_note("missing", "x"), NotFound);
}

TEST(Session, NoteEscapingRoundTrips) {
  for (const std::string text : {"", "plain", "a\\nb", "\t\n\r\\", "trailing\\"})
    EXPECT_EQ(unescape_note(escape_note(text)), text);
}

TEST(Session, ConcurrentEditsNeverLoseUpdates) {
  TempDir dir;
  Session s(dir.file("a.conllu", kThree));
  std::atomic<int> accepted{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        try {
          s.apply_edit("ins_167", Edit::set(1, "MISC", "T=" + std::to_string(t)), s.revision());
          ++accepted;
        } catch (const RevisionConflict&) {
          // another writer got there first
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(s.revision(), static_cast<std::uint64_t>(accepted.load()));
  EXPECT_GT(accepted.load(), 0);
}
