// Copyright 2026 The Triage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.h"
#include "test_support.h"
#include "triage/common/error.h"
#include "triage/evaluation/metrics.h"
#include "triage/evaluation/records.h"
#include "triage/evaluation/report.h"
#include "triage/evaluation/split.h"

namespace triage::evaluation {
namespace {

constexpr auto kA = CategoryId::kSuicidalPlan;
constexpr auto kB = CategoryId::kSelfInjuryBehavior;
constexpr auto kC = CategoryId::kPassiveSuicidalIdeation;

LabelSet L(std::initializer_list<CategoryId> ids) { return LabelSet::Of(ids); }

// Expected values below were computed with scikit-learn
// (accuracy_score, precision_recall_fscore_support with average=micro/macro).

TEST(MetricsTest, SingleLabelHandCase) {
  std::vector<LabelSet> gold = {L({kA}), L({kA}), L({kB})};
  std::vector<Prediction> pred = {L({kA}), L({kB}), L({kB})};
  auto const m = EvaluateRound(gold, pred);
  EXPECT_DOUBLE_EQ(m.accuracy, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.micro.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.micro.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.micro.f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.macro.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.macro.recall, 0.75);
  EXPECT_DOUBLE_EQ(m.macro.f1, 2.0 / 3.0);
}

TEST(MetricsTest, MultiLabelHandCase) {
  constexpr auto a = kA, b = kB, c = kC;
  std::vector<LabelSet> gold = {L({a, b}), L({a}), L({c}), L({b}), L({a, c})};
  std::vector<Prediction> pred = {L({a}), L({a}), L({b}), L({b}), L({a, c})};
  auto const m = EvaluateRound(gold, pred);
  EXPECT_NEAR(m.accuracy, 0.6, 1e-12);
  EXPECT_NEAR(m.micro.precision, 0.8333333333333334, 1e-12);
  EXPECT_NEAR(m.micro.recall, 0.7142857142857143, 1e-12);
  EXPECT_NEAR(m.micro.f1, 0.7692307692307693, 1e-12);
  EXPECT_NEAR(m.macro.precision, 0.8333333333333334, 1e-12);
  EXPECT_NEAR(m.macro.recall, 0.6666666666666666, 1e-12);
  EXPECT_NEAR(m.macro.f1, 0.7222222222222222, 1e-12);
}

TEST(MetricsTest, PerfectSingleLabelIdentity) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LabelSet> gold;
    std::vector<Prediction> pred;
    for (int i = 0; i < 1 + trial % 40; ++i) {
      gold.push_back(testing::RandomSingleLabel(rng));
      pred.push_back(gold.back());
    }
    auto const m = EvaluateRound(gold, pred);
    EXPECT_EQ(m.accuracy, 1.0);
    EXPECT_EQ(m.micro.f1, 1.0);
    EXPECT_EQ(m.macro.f1, 1.0);
    EXPECT_EQ(m.micro.precision, m.accuracy);
  }
}

TEST(MetricsTest, MicroEqualsAccuracyForSingleLabel) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LabelSet> gold;
    std::vector<Prediction> pred;
    for (int i = 0; i < 1 + trial % 25; ++i) {
      gold.push_back(testing::RandomSingleLabel(rng));
      pred.push_back(testing::RandomSingleLabel(rng));
    }
    auto const m = EvaluateRound(gold, pred);
    EXPECT_NEAR(m.micro.precision, m.accuracy, 1e-12);
    EXPECT_NEAR(m.micro.recall, m.accuracy, 1e-12);
    EXPECT_NEAR(m.micro.f1, m.accuracy, 1e-12);
  }
}

TEST(MetricsTest, MatchesOracleOnRandomData) {
  std::mt19937 rng(20260101);
  std::bernoulli_distribution unparseable(0.05);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<LabelSet> gold;
    std::vector<Prediction> pred;
    int const n = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      gold.push_back(testing::RandomMostlySingle(rng, 0.2));
      if (unparseable(rng)) {
        pred.push_back(std::nullopt);
      } else {
        pred.push_back(testing::RandomMostlySingle(rng, 0.2));
      }
    }
    auto const m = EvaluateRound(gold, pred);
    auto const o = testing::OracleMetrics(gold, pred);
    ASSERT_NEAR(m.accuracy, o.accuracy, 1e-12) << trial;
    ASSERT_NEAR(m.micro.precision, o.micro_p, 1e-12) << trial;
    ASSERT_NEAR(m.micro.recall, o.micro_r, 1e-12) << trial;
    ASSERT_NEAR(m.micro.f1, o.micro_f1, 1e-12) << trial;
    ASSERT_NEAR(m.macro.precision, o.macro_p, 1e-12) << trial;
    ASSERT_NEAR(m.macro.recall, o.macro_r, 1e-12) << trial;
    ASSERT_NEAR(m.macro.f1, o.macro_f1, 1e-12) << trial;
  }
}

TEST(MetricsTest, UnparseableCountsAsWrong) {
  std::vector<LabelSet> gold = {L({kA})};
  std::vector<Prediction> pred = {std::nullopt};
  auto const m = EvaluateRound(gold, pred);
  EXPECT_EQ(m.accuracy, 0.0);
  EXPECT_EQ(m.n_unparseable, 1u);
  EXPECT_EQ(m.counts[IndexOf(kA)].fn, 1u);
  EXPECT_EQ(m.errors.at(ErrorTag::kUnparseable), 1u);
}

TEST(MetricsTest, LengthMismatchIsRejected) {
  std::vector<LabelSet> gold = {L({kA}), L({kB})};
  std::vector<Prediction> pred = {L({kA})};
  EXPECT_THROW(EvaluateRound(gold, pred), Error);
}

TEST(ErrorTagTest, Classes) {
  EXPECT_EQ(TagError(L({CategoryId::kSuicideAttempt}), L({CategoryId::kSuicidalPlan})),
            ErrorTag::kAttemptAsOtherSuicidal);
  EXPECT_EQ(TagError(L({CategoryId::kExplorationAboutSuicide}),
                     L({CategoryId::kActiveSuicidalIdeation})),
            ErrorTag::kExplorationAsSuicidal);
  EXPECT_EQ(TagError(L({CategoryId::kIrrelevant}), L({CategoryId::kPassiveSuicidalIdeation})),
            ErrorTag::kIrrelevantAsSuicidal);
  EXPECT_EQ(TagError(L({kA}), std::nullopt), ErrorTag::kUnparseable);
  EXPECT_EQ(TagError(L({kA}), L({kB})), ErrorTag::kOther);
  EXPECT_EQ(TagError(L({kA}), L({kA})), std::nullopt);
}

TEST(AlignTest, RequiresIdenticalIds) {
  std::map<std::string, LabelSet> gold = {{"x", L({kA})}, {"y", L({kB})}};
  PredictionRun run;
  run.predictions = {{"y", L({kB})}, {"x", std::nullopt}};
  std::vector<LabelSet> g;
  std::vector<Prediction> p;
  AlignById(gold, run, g, p);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], L({kA}));
  EXPECT_FALSE(p[0].has_value());

  run.predictions.erase("y");
  try {
    AlignById(gold, run, g, p);
    FAIL() << "expected kMismatchedIds";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMismatchedIds);
  }
}

TEST(AggregateTest, MeanAndSampleStd) {
  std::vector<double> a = {90, 92, 94};
  auto const s = MeanAndSampleStd(a);
  EXPECT_DOUBLE_EQ(s.mean, 92.0);
  EXPECT_DOUBLE_EQ(s.std, 2.0);

  std::vector<double> b = {91.3, 91.7, 92.07};
  auto const t = MeanAndSampleStd(b);
  EXPECT_NEAR(t.mean, 91.69, 1e-12);
  EXPECT_NEAR(t.std, 0.3850973902793922, 1e-12);
  EXPECT_EQ(FormatMeanStd(t), "91.69_{0.39}");

  std::vector<double> one = {50};
  EXPECT_EQ(MeanAndSampleStd(one).std, 0.0);
  EXPECT_THROW(MeanAndSampleStd(std::vector<double>{}), Error);
}

TEST(AggregateTest, SummaryIsInPercent) {
  std::vector<LabelSet> gold = {L({kA}), L({kB})};
  std::vector<Prediction> right = {L({kA}), L({kB})};
  std::vector<Prediction> half = {L({kA}), L({kA})};
  auto report = AggregateRounds({EvaluateRound(gold, right, 1), EvaluateRound(gold, half, 2)});
  EXPECT_DOUBLE_EQ(report[Metric::kAccuracy].mean, 75.0);
  EXPECT_EQ(TableHeader().find('\n'), std::string::npos);
  EXPECT_NE(TableRow(report).find("75.00_{"), std::string::npos);
  EXPECT_THROW(AggregateRounds({}), Error);
}

TEST(ReportTest, EvaluateCountsInstancesAndOccurrences) {
  std::vector<UtteranceRecord> gold(3);
  gold[0] = {"a", "t", Source::kPlatform, L({kA, kB}), false};
  gold[1] = {"b", "t", Source::kPlatform, L({kA}), false};
  gold[2] = {"c", "t", Source::kPlatform, L({kC}), false};
  PredictionRun r1{1, {{"a", L({kA, kB})}, {"b", L({kA})}, {"c", L({kC})}}};
  PredictionRun r2{2, {{"a", L({kA})}, {"b", L({kA})}, {"c", std::nullopt}}};
  std::vector<PredictionRun> runs = {r1, r2};
  auto const report = Evaluate(gold, runs, "m");
  EXPECT_EQ(report.n_instances, 3u);
  EXPECT_EQ(report.n_multi_label_instances, 1u);
  EXPECT_EQ(report.n_label_occurrences, 4u);
  ASSERT_EQ(report.rounds.size(), 2u);
  EXPECT_DOUBLE_EQ(report.rounds[0].accuracy, 1.0);
  auto const json = ReportToJson(report);
  EXPECT_EQ(json.dump(), ReportToJson(Evaluate(gold, runs, "m")).dump());
}

TEST(RecordsTest, DatasetRoundTripAndValidation) {
  UtteranceRecord r{"x1", "我想自杀", Source::kWeibo, L({CategoryId::kActiveSuicidalIdeation}),
                    false};
  std::vector<UtteranceRecord> rows = {r};
  auto const text = SerializeDataset(rows);
  auto const back = ParseDataset(text, "mem");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id, "x1");
  EXPECT_EQ(back[0].gold_labels, r.gold_labels);
  EXPECT_EQ(back[0].char_length(), 4u);
  EXPECT_THROW(ParseDataset(text + text, "dup"), Error);
  EXPECT_THROW(ParseDataset("{\"id\":\"a\",\"text\":\"\"}\n", "empty"), Error);
}

TEST(RecordsTest, PredictionsGroupByRound) {
  std::vector<PredictionRow> rows = {{"a", 2, L({kA}), "x"}, {"a", 1, std::nullopt, "?"}};
  auto const runs = GroupByRound(rows);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].round_index, 1);
  rows.push_back({"a", 1, L({kB}), "y"});
  EXPECT_THROW(GroupByRound(rows), Error);
  auto const json = PredictionToJson({"a", 1, std::nullopt, "?"});
  EXPECT_FALSE(PredictionFromJson(json).labels.has_value());
}

TEST(SplitTest, PartSize) {
  SplitSpec spec;
  EXPECT_EQ(PartSize(118, spec.test, spec), 11u);
  EXPECT_EQ(PartSize(10754, spec.test, spec), 1075u);
  EXPECT_EQ(PartSize(9, spec.test, spec), 0u);
  SplitSpec bad;
  bad.train = -1;
  EXPECT_THROW(bad.Validate(), Error);
}

std::map<std::string, std::size_t> CountByLabel(std::vector<UtteranceRecord> const& part) {
  std::map<std::string, std::size_t> out;
  for (auto const& r : part) {
    auto const key = r.gold_labels->IsMultiLabel() ? "multi" : r.gold_labels->Keys()[0];
    ++out[key];
  }
  return out;
}

TEST(SplitTest, CorpusCountsPerLabel) {
  auto const data = testing::SyntheticDataset(testing::kCorpusCounts, testing::kCorpusMultiLabel, 1);
  SplitSpec spec;
  spec.seed = 42;
  auto const split = StratifiedSplit(data, spec);

  // Frozen from an exact floor(n * 1 / 10) computation per stratum.
  std::map<std::string, std::array<std::size_t, 3>> const want = {
      {"suicide_attempt", {96, 11, 11}},          {"suicidal_preparatory_act", {18, 2, 2}},
      {"suicidal_plan", {125, 15, 15}},           {"active_suicidal_ideation", {1144, 143, 143}},
      {"passive_suicidal_ideation", {1105, 137, 137}}, {"self_injury_behavior", {128, 16, 16}},
      {"self_injury_ideation", {40, 4, 4}},       {"aggression_against_others", {253, 31, 31}},
      {"aggression_against_users", {208, 26, 26}}, {"exploration_about_suicide", {297, 36, 36}},
      {"irrelevant", {8604, 1075, 1075}},         {"multi", {166, 20, 20}},
  };
  auto const train = CountByLabel(split.train);
  auto const val = CountByLabel(split.val);
  auto const test = CountByLabel(split.test);
  for (auto const& [label, sizes] : want) {
    EXPECT_EQ(train.at(label), sizes[0]) << label;
    EXPECT_EQ(val.at(label), sizes[1]) << label;
    EXPECT_EQ(test.at(label), sizes[2]) << label;
  }
}

TEST(SplitTest, DisjointCoveringDeterministic) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> counts(kCategoryCount);
    for (auto& c : counts) c = rng() % 40;
    auto const data = testing::SyntheticDataset(counts, rng() % 15, rng());
    SplitSpec spec;
    spec.seed = rng();
    auto const a = StratifiedSplit(data, spec);
    auto const b = StratifiedSplit(data, spec);

    std::multiset<std::string> seen;
    for (auto const* part : {&a.train, &a.val, &a.test}) {
      for (auto const& r : *part) seen.insert(r.id);
    }
    ASSERT_EQ(seen.size(), data.size());
    ASSERT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), data.size());

    auto ids = [](std::vector<UtteranceRecord> const& v) {
      std::vector<std::string> out;
      for (auto const& r : v) out.push_back(r.id);
      return out;
    };
    EXPECT_EQ(ids(a.train), ids(b.train));
    EXPECT_EQ(ids(a.val), ids(b.val));
    EXPECT_EQ(ids(a.test), ids(b.test));
  }
}

TEST(SplitTest, SeedChangesMembership) {
  auto const data = testing::SyntheticDataset(testing::kCorpusCounts, 0, 2);
  SplitSpec a, b;
  a.seed = 1;
  b.seed = 2;
  auto ids = [](std::vector<UtteranceRecord> const& v) {
    std::set<std::string> out;
    for (auto const& r : v) out.insert(r.id);
    return out;
  };
  EXPECT_NE(ids(StratifiedSplit(data, a).test), ids(StratifiedSplit(data, b).test));
}

TEST(SplitTest, UnlabeledRecordIsRejected) {
  std::vector<UtteranceRecord> data(1);
  data[0].id = "x";
  data[0].text = "t";
  try {
    StratifiedSplit(data, SplitSpec{});
    FAIL() << "expected kUnlabeledRecord";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnlabeledRecord);
  }
}

}  // namespace
}  // namespace triage::evaluation
