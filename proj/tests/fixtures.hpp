#pragma once

// One seeded violation per validation rule, each on top of the same valid
// base sentence.

#include <string>
#include <vector>

#include "treebank/conllu.hpp"
#include "treebank/validator.hpp"

namespace testing_support {

inline const char* const kValidBase =
    "# sent_id = base\n"
    "# text = Fatma Ahmet'i gördü.\n"
    "1\tFatma\tFatma\tPROPN\t_\tCase=Nom|Number=Sing\t3\tnsubj\t_\t_\n"
    "2\tAhmet'i\tAhmet\tPROPN\t_\tCase=Acc|Number=Sing\t3\tobj\t_\t_\n"
    "3\tgördü\tgör\tVERB\t_\tTense=Past\t0\troot\t_\tSpaceAfter=No\n"
    "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n"
    "\n";

struct RuleFixture {
  std::string name;
  treebank::IssueCode expected;
  treebank::Document doc;
};

inline std::vector<RuleFixture> rule_fixtures() {
  using namespace treebank;
  const Sentence base = parse_document(kValidBase).sentences.at(0);
  std::vector<RuleFixture> out;
  auto add = [&](std::string name, IssueCode code, auto mutate) {
    Sentence s = base;
    mutate(s);
    Document d;
    d.sentences.push_back(std::move(s));
    out.push_back({std::move(name), code, std::move(d)});
  };
  add("id-sequence", IssueCode::IdSequence, [](Sentence& s) { s.tokens[3].id = TokenId(5); });
  add("single-root", IssueCode::Root, [](Sentence& s) {
    s.tokens[3].head = 0;
    s.tokens[3].deprel = "root";
  });
  add("head-range", IssueCode::HeadRange, [](Sentence& s) { s.tokens[3].head = 9; });
  add("cycle", IssueCode::Cycle, [](Sentence& s) {
    s.tokens[0].head = 2;
    s.tokens[1].head = 1;
  });
  add("upos", IssueCode::UnknownUpos, [](Sentence& s) { s.tokens[1].upos = "PROPNN"; });
  add("deprel", IssueCode::UnknownDeprel, [](Sentence& s) { s.tokens[1].deprel = "object"; });
  add("feats", IssueCode::InvalidFeats, [](Sentence& s) { s.tokens[0].feats = make_feats_field("Case"); });
  add("range-token", IssueCode::RangeToken, [](Sentence& s) {
    Token r;
    r.id = TokenId{2, 3};
    r.form = "Ahmet'igördü";
    r.head = 3;
    s.tokens.insert(s.tokens.begin() + 1, r);
  });
  return out;
}

}  // namespace testing_support
