// Copyright 2026 The histbias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "histbias/corpus.hpp"
#include "histbias/random.hpp"
#include "unit/test_util.hpp"

namespace histbias {
namespace {

std::vector<Document> Parse(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return ReadCorpus(in);
}

TEST(Date, ParsesAllPrecisions) {
  auto d = Date::Parse("1791-03-01");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->year, 1791);
  EXPECT_EQ(d->month, 3);
  EXPECT_EQ(d->day, 1);
  EXPECT_EQ(d->ToString(), "1791-03-01");
  EXPECT_EQ(Date::Parse("1791")->ToString(), "1791");
  EXPECT_EQ(Date::Parse("1791-03")->ToString(), "1791-03");
}

TEST(Date, RejectsMalformed) {
  EXPECT_FALSE(Date::Parse(""));
  EXPECT_FALSE(Date::Parse("17a1"));
  EXPECT_FALSE(Date::Parse("1791-13"));
  EXPECT_FALSE(Date::Parse("1791-02-30"));
  EXPECT_FALSE(Date::Parse("1791-3-1"));
  EXPECT_TRUE(Date::Parse("1792-02-29"));
  EXPECT_FALSE(Date::Parse("1791-02-29"));
}

TEST(LoadCorpus, KeepsFileOrder) {
  auto docs = Parse(
      "{\"id\":\"a\",\"text\":\"one\"}\n"
      "{\"id\":\"b\",\"text\":\"two\"}\n"
      "{\"id\":\"c\",\"text\":\"three\"}\n");
  ASSERT_EQ(docs.size(), 3u);
  EXPECT_EQ(docs[0].id, "a");
  EXPECT_EQ(docs[1].id, "b");
  EXPECT_EQ(docs[2].id, "c");
}

TEST(LoadCorpus, ParsesDateAndSource) {
  auto docs = Parse("{\"id\":\"a\",\"text\":\"x\",\"date\":\"1791-03-01\",\"source\":\"gazette\"}\n");
  ASSERT_EQ(docs.size(), 1u);
  ASSERT_TRUE(docs[0].date);
  EXPECT_EQ(*docs[0].date, (Date{1791, 3, 1}));
  EXPECT_EQ(docs[0].source, "gazette");
}

TEST(LoadCorpus, MissingTextNamesTheLine) {
  try {
    Parse("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"b\"}\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, DuplicateIdNamesTheId) {
  try {
    Parse("{\"id\":\"dup\",\"text\":\"x\"}\n{\"id\":\"dup\",\"text\":\"y\"}\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("dup"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, RejectsBlankTextAndBadDate) {
  EXPECT_HB_ERROR(Parse("{\"id\":\"a\",\"text\":\"   \"}\n"), kParse);
  EXPECT_HB_ERROR(Parse("{\"id\":\"\",\"text\":\"x\"}\n"), kParse);
  EXPECT_HB_ERROR(Parse("{\"id\":\"a\",\"text\":\"x\",\"date\":\"1791-99\"}\n"), kParse);
  EXPECT_HB_ERROR(Parse("not json\n"), kParse);
}

TEST(LoadCorpus, SaveLoadRoundTrip) {
  const std::string src =
      "{\"id\":\"a\",\"text\":\"The houfe \\\"quoted\\\"\\n€\",\"date\":\"1791\"}\n"
      "{\"id\":\"b\",\"text\":\"plain\",\"source\":\"s\"}\n";
  const auto docs = Parse(src);
  const auto again = Parse(CorpusToJsonl(docs));
  EXPECT_EQ(docs, again);
  const auto path = testing::ScratchDir() / "c.jsonl";
  SaveCorpus(docs, path);
  EXPECT_EQ(LoadCorpus(path), docs);
}

TEST(LoadCorpus, MissingFileIsIoError) {
  EXPECT_HB_ERROR(LoadCorpus("/nonexistent/corpus.jsonl"), kIo);
}

// ---------------------------------------------------------------------------

CleanupRule LongS() {
  return {"([aeiou])f(?=[aeiou])", "$1s", RuleScope::kWordInternal, true};
}

TEST(CleanOcr, LongSRuleFixesHoufe) {
  EXPECT_EQ(CleanOcr("houfe", {LongS()}), "house");
  EXPECT_EQ(CleanOcr("The houfe is fold", {LongS()}), "The house is fold");
}

TEST(CleanOcr, ShippedLongSRuleFileMatches) {
  const auto rules = LoadCleanupRules(testing::DataPath("long_s_rule.jsonl"));
  ASSERT_EQ(rules.size(), 1u);
  EXPECT_EQ(CleanOcr("houfe", rules), "house");
}

TEST(CleanOcr, EmptyInput) {
  EXPECT_EQ(CleanOcr("", {LongS()}), "");
  const auto rules = LoadCleanupRules(testing::DataPath("cleanup_rules.jsonl"));
  EXPECT_EQ(CleanOcr("", rules), "");
}

TEST(CleanOcr, ShippedRulesFixFold) {
  const auto rules = LoadCleanupRules(testing::DataPath("cleanup_rules.jsonl"));
  EXPECT_EQ(CleanOcr("fold", rules), "sold");
  EXPECT_EQ(CleanOcr("The houfe was fold.", rules), "The house was sold.");
  EXPECT_EQ(CleanOcr("Houfe", rules), "House");
  // Whole-word rules leave words that merely contain a key alone.
  EXPECT_EQ(CleanOcr("folder unfold", rules), "folder unfold");
}

TEST(CleanOcr, RulesApplyInOrderEachExhaustively) {
  std::vector<CleanupRule> rules{{"aa", "a", RuleScope::kAnywhere, false},
                                 {"a", "b", RuleScope::kAnywhere, false}};
  // "aaaa" -> "aa" -> "a" under the first rule, then "b".
  EXPECT_EQ(CleanOcr("aaaa", rules), "b");
  std::vector<CleanupRule> reversed{rules[1], rules[0]};
  EXPECT_EQ(CleanOcr("aaaa", reversed), "bbbb");
}

TEST(CleanOcr, ScopesRestrictMatches) {
  const CleanupRule anywhere{"f", "s", RuleScope::kAnywhere, false};
  const CleanupRule whole{"fo", "so", RuleScope::kWholeWord, false};
  const CleanupRule internal{"f.", "s", RuleScope::kWordInternal, false};
  EXPECT_EQ(CleanOcr("fof", {anywhere}), "sos");
  EXPECT_EQ(CleanOcr("fo foo fo.", {whole}), "so foo so.");
  EXPECT_EQ(CleanOcr("af. f.", {internal}), "af. f.");
}

TEST(CleanOcr, RegexRulesValidated) {
  EXPECT_HB_ERROR(Cleaner({{"(", "x", RuleScope::kAnywhere, true}}), kInvalidArgument);
  EXPECT_HB_ERROR(Cleaner({{"", "x", RuleScope::kAnywhere, false}}), kInvalidArgument);
}

TEST(CleanOcr, ReadRulesRejectsUnknownScope) {
  std::istringstream in("{\"pattern\":\"a\",\"replacement\":\"b\",\"scope\":\"sideways\"}\n");
  EXPECT_HB_ERROR(ReadCleanupRules(in), kParse);
}

TEST(CleanOcr, ShippedRuleOutputsAreNeverKeys) {
  const auto rules = LoadCleanupRules(testing::DataPath("cleanup_rules.jsonl"));
  ASSERT_GT(rules.size(), 100u);
  std::set<std::string> keys;
  for (const auto& r : rules) {
    EXPECT_EQ(r.scope, RuleScope::kWholeWord);
    keys.insert(r.pattern);
  }
  for (const auto& r : rules) EXPECT_FALSE(keys.count(r.replacement)) << r.replacement;
}

// clean(clean(t)) == clean(t) over random texts built from rule keys,
// their corrections, random letters and punctuation.
TEST(CleanOcr, ShippedRulesAreIdempotentOnFuzzCorpus) {
  const auto rules = LoadCleanupRules(testing::DataPath("cleanup_rules.jsonl"));
  const Cleaner clean(rules);
  Rng rng(2026);
  const std::string pieces = " .,;'-\xE2\x80\x99";
  for (int t = 0; t < 500; ++t) {
    std::string text;
    const int n = 1 + static_cast<int>(rng.Uniform(30));
    for (int i = 0; i < n; ++i) {
      switch (rng.Uniform(4)) {
        case 0:
          text += rules[rng.Uniform(rules.size())].pattern;
          break;
        case 1:
          text += rules[rng.Uniform(rules.size())].replacement;
          break;
        case 2:
          for (int k = 0; k < 1 + static_cast<int>(rng.Uniform(6)); ++k) {
            text.push_back(static_cast<char>('a' + rng.Uniform(26)));
          }
          break;
        default:
          text.push_back(pieces[rng.Uniform(7)]);
      }
      if (rng.Uniform(2)) text.push_back(' ');
    }
    const std::string once = clean(text);
    EXPECT_EQ(clean(once), once) << "input: " << text;
  }
}

// ---------------------------------------------------------------------------

std::vector<PeriodSpec> Periods() {
  return {{"p1", 1751, 1790}, {"p2", 1791, 1825}};
}

Document Doc(std::string id, std::optional<int> year) {
  Document d{std::move(id), "text", std::nullopt, std::nullopt};
  if (year) d.date = Date{*year, 0, 0};
  return d;
}

TEST(SplitPeriods, AssignsByYear) {
  auto b = SplitPeriods({Doc("a", 1792)}, Periods());
  ASSERT_EQ(b["p2"].size(), 1u);
  EXPECT_EQ(b["p2"][0].id, "a");
  EXPECT_TRUE(b["p1"].empty());
}

TEST(SplitPeriods, UndatedAndOutOfRangeGoToUndated) {
  auto b = SplitPeriods({Doc("a", std::nullopt), Doc("b", 1750), Doc("c", 1900)}, Periods());
  EXPECT_EQ(b[std::string(kUndatedBucket)].size(), 3u);
}

TEST(SplitPeriods, BoundariesAreInclusive) {
  auto b = SplitPeriods({Doc("a", 1751), Doc("b", 1790), Doc("c", 1791), Doc("d", 1825)},
                        Periods());
  EXPECT_EQ(b["p1"].size(), 2u);
  EXPECT_EQ(b["p2"].size(), 2u);
}

TEST(SplitPeriods, PartitionProperty) {
  Rng rng(5);
  std::vector<Document> docs;
  for (int i = 0; i < 1000; ++i) {
    std::optional<int> y;
    if (rng.Uniform(5)) y = 1700 + static_cast<int>(rng.Uniform(200));
    docs.push_back(Doc("d" + std::to_string(i), y));
  }
  const auto buckets = SplitPeriods(docs, Periods());
  std::set<std::string> ids;
  std::size_t total = 0;
  for (const auto& [name, bucket] : buckets) {
    total += bucket.size();
    for (const auto& d : bucket) EXPECT_TRUE(ids.insert(d.id).second);
  }
  EXPECT_EQ(total, docs.size());
}

TEST(SplitPeriods, ValidatesPeriods) {
  EXPECT_HB_ERROR(SplitPeriods({}, {{"a", 1800, 1790}}), kInvalidArgument);
  EXPECT_HB_ERROR(SplitPeriods({}, {{"a", 1751, 1800}, {"b", 1800, 1825}}), kInvalidArgument);
  EXPECT_HB_ERROR(SplitPeriods({}, {{"b", 1800, 1825}, {"a", 1751, 1790}}), kInvalidArgument);
  EXPECT_HB_ERROR(SplitPeriods({}, {{"undated", 1751, 1790}}), kInvalidArgument);
}

TEST(SplitPeriods, ShippedPeriodsFile) {
  const auto p = LoadPeriods(testing::DataPath("periods.json"));
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].start_year, 1751);
  EXPECT_EQ(p[0].end_year, 1790);
  EXPECT_EQ(p[1].start_year, 1791);
  EXPECT_EQ(p[1].end_year, 1825);
  EXPECT_EQ(p[2].start_year, 1826);
  EXPECT_EQ(p[2].end_year, 1876);
  auto b = SplitPeriods({Doc("a", 1792)}, p);
  EXPECT_EQ(b[p[1].name].size(), 1u);
}

}  // namespace
}  // namespace histbias
