// Copyright 2026 The AtlasKit Authors.
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

#include "atlas/run_data.h"

#include <sstream>

#include <gtest/gtest.h>

#include "atlas/error.h"
#include "test_support.h"

namespace atlas {
namespace {

const char* kHeader =
    "run_id,n_params,mixture_id,eval_language,loss,total_tokens,"
    "sampling_weights,cumulative_tokens\n";

RunRecord Record(std::map<Language, double> w, std::map<Language, TokenCount> tokens,
                 Language eval) {
  RunRecord r;
  r.run_id = "r";
  r.n_params = 1000;
  r.mixture_id = "m";
  r.sampling_weights = std::move(w);
  r.cumulative_tokens = std::move(tokens);
  for (const auto& [l, n] : r.cumulative_tokens) r.total_tokens += n;
  r.eval_language = std::move(eval);
  r.loss = 2.0;
  return r;
}

std::string ErrorOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseRunsTest, HeaderOnlyGivesEmptySet) {
  std::istringstream in(kHeader);
  EXPECT_TRUE(ParseRuns(in, TableFormat::kCsv).empty());
}

TEST(ParseRunsTest, SingleBilingualJsonlRow) {
  std::istringstream in(
      R"({"run_id":"a","n_params":1e8,"mixture_id":"en-fr","eval_language":"fr",)"
      R"("loss":3.1,"total_tokens":100,"sampling_weights":{"en":0.5,"fr":0.5},)"
      R"("cumulative_tokens":{"en":50,"fr":50}})"
      "\n");
  const RunSet runs = ParseRuns(in, TableFormat::kJsonl);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].MixtureLanguages(), (std::vector<Language>{"en", "fr"}));
  EXPECT_EQ(runs[0].n_params, 100'000'000);
  EXPECT_EQ(runs[0].TokensFor("de"), 0);
}

TEST(ParseRunsTest, BadWeightSumNamesFieldAndRow) {
  std::istringstream in(std::string(kHeader) +
                        "a,10,m,en,2.0,10,\"{\"\"en\"\":0.5,\"\"fr\"\":0.3}\",\"{\"\"en\"\":10}\"\n");
  const std::string msg = ErrorOf([&] { ParseRuns(in, TableFormat::kCsv); });
  EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("sampling_weights"), std::string::npos) << msg;
}

TEST(ParseRunsTest, MalformedNumberNamesFieldAndRow) {
  std::istringstream in(std::string(kHeader) +
                        "a,10,m,en,2.0,10,\"{\"\"en\"\":1}\",\"{\"\"en\"\":10}\"\n"
                        "b,ten,m,en,2.0,10,\"{\"\"en\"\":1}\",\"{\"\"en\"\":10}\"\n");
  const std::string msg = ErrorOf([&] { ParseRuns(in, TableFormat::kCsv); });
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("n_params"), std::string::npos) << msg;
}

TEST(ParseRunsTest, SchemaMismatchesAreErrors) {
  std::istringstream extra("run_id,n_params,mixture_id,eval_language,loss,total_tokens,"
                           "sampling_weights,cumulative_tokens,bogus\n");
  EXPECT_THROW(ParseRuns(extra, TableFormat::kCsv), DataError);
  std::istringstream missing("run_id,n_params\n");
  EXPECT_THROW(ParseRuns(missing, TableFormat::kCsv), DataError);
  std::istringstream unknown_key(R"({"run_id":"a","surprise":1})" "\n");
  EXPECT_THROW(ParseRuns(unknown_key, TableFormat::kJsonl), DataError);
  EXPECT_THROW(ParseTableFormat("parquet"), DataError);
}

TEST(ParseRunsTest, TokenSlackIsConfigurable) {
  RunRecord r = Record({{"en", 1.0}}, {{"en", 1'000'000}}, "en");
  r.total_tokens = 1'000'001;
  EXPECT_THROW(RunSet({r}, ValidationConfig{1e-9, 1e-9}), RecordError);
  EXPECT_NO_THROW(RunSet({r}, ValidationConfig{1e-6, 1e-9}));
}

TEST(ParseRunsTest, RoundTripPropertyBothFormats) {
  Rng rng(31);
  const std::vector<Language> pool{"en", "fr", "de", "hi", "sw"};
  for (int c = 0; c < 50; ++c) {
    std::vector<RunRecord> records;
    const auto n = rng.Below(8);
    for (std::uint64_t i = 0; i < n; ++i) {
      records.push_back(testing::RandomRecord(rng, pool, "r" + std::to_string(i)));
    }
    const RunSet runs(records);
    for (auto format : {TableFormat::kCsv, TableFormat::kJsonl}) {
      std::stringstream buf;
      WriteRuns(buf, runs, format);
      EXPECT_EQ(ParseRuns(buf, format), runs);
    }
  }
}

TEST(TokenAccountingTest, MonolingualRun) {
  const auto b = TokenAccounting(Record({{"fr", 1.0}}, {{"fr", 100}}, "fr"), "fr", {});
  EXPECT_EQ(b.d_target, 100);
  EXPECT_TRUE(b.d_transfer.empty());
  EXPECT_EQ(b.d_other, 0);
}

TEST(TokenAccountingTest, BilingualHandArithmetic) {
  const std::vector<Language> transfer{"en"};
  const auto b = TokenAccounting(
      Record({{"en", 0.5}, {"fr", 0.5}}, {{"en", 50}, {"fr", 50}}, "fr"), "fr", transfer);
  EXPECT_EQ(b.d_target, 50);
  ASSERT_EQ(b.d_transfer.size(), 1u);
  EXPECT_EQ(b.d_transfer[0], (std::pair<Language, TokenCount>{"en", 50}));
  EXPECT_EQ(b.d_other, 0);
}

TEST(TokenAccountingTest, UnimaxStyleIdentity) {
  const RunRecord r = Record(
      {{"hi", 0.2}, {"en", 0.2}, {"fr", 0.2}, {"es", 0.2}, {"de", 0.1}, {"sw", 0.1}},
      {{"hi", 211}, {"en", 197}, {"fr", 203}, {"es", 188}, {"de", 101}, {"sw", 99}}, "hi");
  const std::vector<Language> transfer{"en", "fr", "es"};
  const auto b = TokenAccounting(r, "hi", transfer);
  EXPECT_EQ(b.d_other, r.total_tokens - 211 - 197 - 203 - 188);
  EXPECT_EQ(b.other_languages, (std::vector<Language>{"de", "sw"}));
  EXPECT_EQ(b.Total(), r.total_tokens);
}

TEST(TokenAccountingTest, TargetInTransferSetThrows) {
  const std::vector<Language> transfer{"fr"};
  EXPECT_THROW(TokenAccounting(Record({{"fr", 1.0}}, {{"fr", 1}}, "fr"), "fr", transfer),
               DataError);
}

TEST(TokenAccountingTest, ComponentsSumExactlyProperty) {
  Rng rng(4);
  const std::vector<Language> pool{"en", "fr", "de", "hi", "sw", "yo"};
  for (int c = 0; c < testing::kPropertyCases; ++c) {
    const RunRecord r = testing::RandomRecord(rng, pool, "p");
    const Language target = pool[rng.Below(pool.size())];
    std::vector<Language> transfer;
    for (const auto& l : pool) {
      if (l != target && rng.Uniform() < 0.4) transfer.push_back(l);
    }
    const auto b = TokenAccounting(r, target, transfer);
    EXPECT_EQ(b.Total(), r.total_tokens);
    EXPECT_GE(b.d_other, 0);
  }
}

TEST(SelectTransferSetTest, DegenerateCases) {
  const RunSet runs({Record({{"sw", 1.0}}, {{"sw", 10}}, "sw")});
  EXPECT_TRUE(SelectTransferSet(runs, "sw", 0).empty());
  EXPECT_TRUE(SelectTransferSet(runs, "sw", 3).empty());
}

TEST(SelectTransferSetTest, LexicographicTieBreak) {
  const RunSet runs({
      Record({{"sw", 0.5}, {"en", 0.5}}, {{"sw", 60}, {"en", 60}}, "sw"),
      Record({{"sw", 0.5}, {"fr", 0.5}}, {{"sw", 40}, {"fr", 40}}, "sw"),
      Record({{"sw", 0.5}, {"de", 0.5}}, {{"sw", 40}, {"de", 40}}, "sw"),
      // Not co-sampled with sw, so it must not count.
      Record({{"fr", 1.0}}, {{"fr", 1000}}, "fr"),
  });
  EXPECT_EQ(SelectTransferSet(runs, "sw", 2), (std::vector<Language>{"en", "de"}));
  EXPECT_EQ(SelectTransferSet(runs, "sw", 5), (std::vector<Language>{"en", "de", "fr"}));
}

TEST(CatalogTest, RejectsNonPositiveAndNamesMissingLanguage) {
  EXPECT_THROW(CorpusCatalog({{"en", 0}}), DataError);
  const CorpusCatalog cat({{"en", 5}});
  EXPECT_EQ(cat.UniqueTokens("en"), 5);
  const std::string msg = ErrorOf([&] { cat.UniqueTokens("zu"); });
  EXPECT_NE(msg.find("zu"), std::string::npos);
}

TEST(CatalogTest, RoundTrips) {
  const CorpusCatalog cat({{"en", 5}, {"fr", 2'800'000'000'000}});
  for (auto format : {TableFormat::kCsv, TableFormat::kJsonl}) {
    std::stringstream buf;
    WriteCatalog(buf, cat, format);
    EXPECT_EQ(ParseCatalog(buf, format).entries(), cat.entries());
  }
}

TEST(CurvesTest, GroupsAndSortsPoints) {
  std::istringstream in(
      "regime_id,eval_language,tokens,loss\n"
      "mono,sw,100,2.0\nmono,sw,10,3.0\nbi,sw,10,2.5\nbi,sw,100,1.5\n");
  const auto curves = ParseCurves(in, TableFormat::kCsv);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[0].regime_id(), "mono");
  EXPECT_EQ(curves[0].first_tokens(), 10.0);
  EXPECT_EQ(curves[0].points()[1].loss, 2.0);
}

TEST(CurvesTest, InvariantsAreEnforced) {
  EXPECT_THROW(LearningCurve("x", "en", {{1.0, 2.0}}), DataError);
  EXPECT_THROW(LearningCurve("x", "en", {{1.0, 2.0}, {1.0, 1.0}}), DataError);
  EXPECT_THROW(LearningCurve("x", "en", {{1.0, 2.0}, {2.0, 0.0}}), DataError);
  std::istringstream dup("regime_id,eval_language,tokens,loss\nr,en,5,2\nr,en,5,1\n");
  EXPECT_THROW(ParseCurves(dup, TableFormat::kCsv), DataError);
}

TEST(CurvesTest, RoundTripProperty) {
  Rng rng(12);
  for (int c = 0; c < 50; ++c) {
    std::vector<LearningCurve> curves{testing::RandomDecreasingCurve(rng, 2 + rng.Below(6)),
                                      testing::RandomDecreasingCurve(rng, 3, true)};
    curves[1] = LearningCurve("other", "yy",
                              {curves[1].points().begin(), curves[1].points().end()});
    for (auto format : {TableFormat::kCsv, TableFormat::kJsonl}) {
      std::stringstream buf;
      WriteCurves(buf, curves, format);
      EXPECT_EQ(ParseCurves(buf, format), curves);
    }
  }
}

}  // namespace
}  // namespace atlas
