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

#include "oracles.h"
#include "test_support.h"
#include "triage/annotation/adjudication.h"
#include "triage/annotation/ingest.h"
#include "triage/annotation/kappa.h"
#include "triage/annotation/workflow.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::annotation {
namespace {

using Table = std::vector<std::vector<std::int64_t>>;
using taxonomy::Taxonomy;

constexpr auto kA = CategoryId::kSuicidalPlan;
constexpr auto kB = CategoryId::kSelfInjuryBehavior;
constexpr auto kC = CategoryId::kAggressionAgainstOthers;

ErrorCode CodeOf(std::function<void()> const& f) {
  try {
    f();
  } catch (Error const& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Reference values computed with statsmodels.stats.inter_rater.fleiss_kappa.

TEST(FleissKappaTest, HandCaseIsExact) {
  Table t = {{3, 0}, {2, 1}, {0, 3}};
  auto const r = FleissKappa(t);
  EXPECT_EQ(r.kappa, 0.55);
  EXPECT_EQ(r.n_items, 3u);
  EXPECT_EQ(r.n_raters, 3u);
  EXPECT_DOUBLE_EQ(r.observed_agreement, 7.0 / 9.0);
  EXPECT_DOUBLE_EQ(r.expected_agreement, 0.5061728395061729);
}

TEST(FleissKappaTest, StatsmodelsValues) {
  Table ten = {{3, 0, 0, 0}, {2, 1, 0, 0}, {1, 1, 1, 0}, {0, 3, 0, 0}, {0, 2, 0, 1},
               {0, 0, 3, 0}, {1, 0, 2, 0}, {0, 0, 0, 3}, {0, 1, 0, 2}, {3, 0, 0, 0}};
  EXPECT_NEAR(FleissKappa(ten).kappa, 0.503012048192771, 1e-12);
  Table five = {{1, 1, 1, 0, 0}, {0, 0, 2, 1, 0}, {0, 0, 0, 0, 3}, {2, 0, 0, 0, 1}, {0, 3, 0, 0, 0}};
  EXPECT_NEAR(FleissKappa(five).kappa, 0.396551724137931, 1e-12);
  Table negative = {{2, 1}, {1, 2}, {2, 1}, {1, 2}};
  EXPECT_NEAR(FleissKappa(negative).kappa, -0.33333333333333337, 1e-12);
}

TEST(FleissKappaTest, UnanimousIsOne) {
  Table t = {{3, 0, 0}, {0, 3, 0}, {0, 0, 3}};
  EXPECT_EQ(FleissKappa(t).kappa, 1.0);
  Table single = {{3}, {3}};
  EXPECT_EQ(FleissKappa(single).kappa, 1.0);
}

TEST(FleissKappaTest, Errors) {
  EXPECT_EQ(CodeOf([] { FleissKappa(Table{}); }), ErrorCode::kUnevenRaters);
  EXPECT_EQ(CodeOf([] { FleissKappa(Table{{3, 0}, {1, 1}}); }), ErrorCode::kUnevenRaters);
  EXPECT_EQ(CodeOf([] { FleissKappa(Table{{1, 0}, {0, 1}}); }), ErrorCode::kUnevenRaters);
}

TEST(FleissKappaTest, MatchesBruteForceOracle) {
  std::mt19937 rng(1234);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 1000; ++trial) {
    auto const table = testing::RandomCountTable(rng, 10, 3, 5);
    KappaReport r;
    try {
      r = FleissKappa(table);
    } catch (Error const& e) {
      // Everything in one column but not unanimous cannot happen with
      // whole-row votes; any other error is a failure.
      ADD_FAILURE() << ErrorCodeName(e.code()) << " " << e.what();
      continue;
    }
    auto const ratings = testing::ExpandCounts(table);
    bool one_column = true;
    for (auto const& item : ratings) {
      for (int c : item) one_column = one_column && c == ratings[0][0];
    }
    if (one_column) {
      EXPECT_EQ(r.kappa, 1.0);
    } else {
      ASSERT_NEAR(r.kappa, testing::BruteForceKappa(ratings), 1e-9) << trial;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(FleissKappaTest, InvariantUnderPermutations) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto table = testing::RandomCountTable(rng, 10, 3, 5);
    double const before = FleissKappa(table).kappa;
    std::shuffle(table.begin(), table.end(), rng);
    std::vector<std::size_t> cols(table[0].size());
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(cols.begin(), cols.end(), rng);
    Table permuted;
    for (auto const& row : table) {
      std::vector<std::int64_t> p;
      for (auto c : cols) p.push_back(row[c]);
      permuted.push_back(p);
    }
    EXPECT_NEAR(FleissKappa(permuted).kappa, before, 1e-12);
    EXPECT_LE(FleissKappa(permuted).kappa, 1.0);
  }
}

TEST(QualityGateTest, StrictLessThan) {
  EXPECT_EQ(QualityGate(0.555), GateDecision::kRejected);
  EXPECT_EQ(QualityGate(0.600), GateDecision::kAccepted);
  EXPECT_EQ(QualityGate(0.739), GateDecision::kAccepted);
  EXPECT_EQ(QualityGate(0.5999999), GateDecision::kRejected);
  EXPECT_EQ(QualityGate(0.5, 0.5), GateDecision::kAccepted);
  EXPECT_EQ(PresetFor(Phase::kTrial).gate_threshold, 0.5);
  EXPECT_EQ(PresetFor(Phase::kLargeScale).gate_threshold, 0.6);
}

TEST(PresetTest, PhaseSizes) {
  EXPECT_EQ(PresetFor(Phase::kTrial).batch_sizes, (std::vector<std::size_t>{200, 300, 300}));
  EXPECT_EQ(PresetFor(Phase::kMiniBatch).batch_sizes, std::vector<std::size_t>(5, 100));
  EXPECT_EQ(PresetFor(Phase::kLargeScale).batch_sizes, std::vector<std::size_t>(27, 500));
}

Vote V(std::string who, std::string inst, LabelSet labels) {
  return Vote{std::move(who), std::move(inst), labels, 0};
}

TEST(AdjudicationTest, MajorityAndDiscussion) {
  std::vector<Vote> two_agree = {V("x", "i", LabelSet::Of({kA})), V("y", "i", LabelSet::Of({kB})),
                                 V("z", "i", LabelSet::Of({kA}))};
  auto const r = std::get<Resolution>(Adjudicate(two_agree));
  EXPECT_EQ(r.final_labels, LabelSet::Of({kA}));
  EXPECT_EQ(r.participants, (std::vector<std::string>{"x", "z"}));

  std::vector<Vote> distinct = {V("x", "i", LabelSet::Of({kA})), V("y", "i", LabelSet::Of({kB})),
                                V("z", "i", LabelSet::Of({kC}))};
  EXPECT_EQ(std::get<DiscussionRequired>(Adjudicate(distinct)).reason,
            DiscussionReason::kAllDistinct);

  std::vector<Vote> multi = {V("x", "i", LabelSet::Of({kA, kB})), V("y", "i", LabelSet::Of({kA})),
                             V("z", "i", LabelSet::Of({kA}))};
  EXPECT_EQ(std::get<DiscussionRequired>(Adjudicate(multi)).reason,
            DiscussionReason::kMultiLabel);

  std::vector<Vote> two = {distinct[0], distinct[1]};
  EXPECT_EQ(CodeOf([&] { Adjudicate(two); }), ErrorCode::kWrongVoteCount);
  std::vector<Vote> same_rater = {distinct[0], distinct[0], distinct[1]};
  EXPECT_EQ(CodeOf([&] { Adjudicate(same_rater); }), ErrorCode::kWrongVoteCount);
}

TEST(AdjudicationTest, DiscussionNeedsEveryAcknowledgement) {
  std::vector<std::string> annotators = {"x", "y", "z"};
  std::vector<std::string> partial = {"x", "y"};
  EXPECT_EQ(CodeOf([&] { ResolveByDiscussion("i", LabelSet::Of({kA}), annotators, partial); }),
            ErrorCode::kInvalidArgument);
  auto const r = ResolveByDiscussion("i", LabelSet::Of({kA}), annotators, annotators);
  EXPECT_EQ(r.method, ResolutionMethod::kDiscussion);
}

TEST(AdjudicationTest, RandomVotesAlwaysResolveOneWay) {
  std::mt19937 rng(55);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Vote> votes;
    for (auto const* who : {"x", "y", "z"}) {
      votes.push_back(V(who, "i", testing::RandomMostlySingle(rng, 0.15)));
    }
    auto const out = Adjudicate(votes);
    bool const any_multi = std::any_of(votes.begin(), votes.end(),
                                       [](Vote const& v) { return v.labels.IsMultiLabel(); });
    if (auto const* res = std::get_if<Resolution>(&out)) {
      EXPECT_FALSE(any_multi);
      int agree = 0;
      for (auto const& v : votes) agree += v.labels == res->final_labels ? 1 : 0;
      EXPECT_GE(agree, 2);
    } else {
      bool const pair = votes[0].labels == votes[1].labels || votes[0].labels == votes[2].labels ||
                        votes[1].labels == votes[2].labels;
      EXPECT_TRUE(any_multi || !pair);
    }
  }
}

NewBatch SmallBatch(std::string id, std::size_t n, std::optional<double> threshold = {}) {
  NewBatch b;
  b.batch_id = id;
  b.annotators = {"ann1", "ann2", "ann3"};
  b.gate_threshold = threshold;
  for (std::size_t i = 0; i < n; ++i) {
    b.instances.push_back({id + "-" + std::to_string(i), "text " + std::to_string(i),
                           evaluation::Source::kPlatform});
  }
  return b;
}

TEST(WorkflowTest, AcceptedBatchGoesThroughAdjudication) {
  Workflow wf(Taxonomy::Default());
  wf.CreateBatch(SmallBatch("b1", 4));
  // Items 0-2 unanimous on distinct labels, item 3 all distinct.
  LabelSet const labels[] = {LabelSet::Of({kA}), LabelSet::Of({kB}), LabelSet::Of({kC})};
  for (int i = 0; i < 3; ++i) {
    for (auto const* who : {"ann1", "ann2", "ann3"}) {
      wf.SubmitVote("b1", V(who, "b1-" + std::to_string(i), labels[i]));
    }
  }
  wf.SubmitVote("b1", V("ann1", "b1-3", labels[0]));
  wf.SubmitVote("b1", V("ann2", "b1-3", labels[1]));
  wf.SubmitVote("b1", V("ann3", "b1-3", labels[2]));

  auto const outcome = wf.CloseBatch("b1");
  EXPECT_EQ(outcome.decision, GateDecision::kAccepted);
  EXPECT_EQ(outcome.majority.size(), 3u);
  ASSERT_EQ(outcome.discussions.size(), 1u);
  EXPECT_EQ(wf.batch("b1").status, BatchStatus::kAwaitingAdjudication);
  EXPECT_TRUE(wf.Export().empty());

  EXPECT_EQ(CodeOf([&] { wf.SubmitVote("b1", V("ann1", "b1-3", labels[1])); }),
            ErrorCode::kWrongState);
  wf.SubmitResolution("b1-3", labels[1], {"ann1", "ann2", "ann3"});
  EXPECT_EQ(wf.batch("b1").status, BatchStatus::kAccepted);
  auto const exported = wf.Export();
  ASSERT_EQ(exported.size(), 4u);
  EXPECT_EQ(exported[3].gold_labels, labels[1]);
}

TEST(WorkflowTest, RejectedBatchStaysOpenForRevision) {
  Workflow wf(Taxonomy::Default());
  wf.CreateBatch(SmallBatch("b", 3));
  // Every item splits two to one the same way: kappa is negative.
  for (int i = 0; i < 3; ++i) {
    auto const id = "b-" + std::to_string(i);
    wf.SubmitVote("b", V("ann1", id, LabelSet::Of({kA})));
    wf.SubmitVote("b", V("ann2", id, LabelSet::Of({kA})));
    wf.SubmitVote("b", V("ann3", id, LabelSet::Of({kB})));
  }
  auto const outcome = wf.CloseBatch("b");
  EXPECT_EQ(outcome.decision, GateDecision::kRejected);
  EXPECT_EQ(wf.batch("b").status, BatchStatus::kOpen);
  EXPECT_EQ(wf.batch("b").rejections, 1);
  EXPECT_EQ(wf.VotesFor("b-0").size(), 3u);

  for (int i = 0; i < 3; ++i) wf.SubmitVote("b", V("ann3", "b-" + std::to_string(i), LabelSet::Of({kA})));
  auto const again = wf.CloseBatch("b");
  EXPECT_EQ(again.decision, GateDecision::kAccepted);
  EXPECT_EQ(wf.batch("b").status, BatchStatus::kAccepted);
}

TEST(WorkflowTest, Validation) {
  Workflow wf(Taxonomy::Default());
  wf.CreateBatch(SmallBatch("b", 2));
  EXPECT_EQ(CodeOf([&] { wf.CreateBatch(SmallBatch("b", 1)); }), ErrorCode::kInvalidArgument);
  auto dup_instance = SmallBatch("c", 1);
  dup_instance.instances[0].id = "b-0";
  EXPECT_EQ(CodeOf([&] { wf.CreateBatch(dup_instance); }), ErrorCode::kInvalidArgument);
  auto two_annotators = SmallBatch("d", 1);
  two_annotators.annotators = {"a", "a", "b"};
  EXPECT_EQ(CodeOf([&] { wf.CreateBatch(two_annotators); }), ErrorCode::kInvalidArgument);

  EXPECT_EQ(CodeOf([&] { wf.SubmitVote("zzz", V("ann1", "b-0", LabelSet::Of({kA}))); }),
            ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { wf.SubmitVote("b", V("ann1", "nope", LabelSet::Of({kA}))); }),
            ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { wf.SubmitVote("b", V("stranger", "b-0", LabelSet::Of({kA}))); }),
            ErrorCode::kInvalidArgument);
  wf.SubmitVote("b", V("ann1", "b-0", LabelSet::Of({kA})));
  EXPECT_EQ(CodeOf([&] { wf.CloseBatch("b"); }), ErrorCode::kUnevenRaters);
  // A failed close leaves the batch untouched.
  EXPECT_EQ(wf.batch("b").status, BatchStatus::kOpen);
  EXPECT_EQ(wf.batch("b").rejections, 0);
}

TEST(WorkflowTest, PageShowsOwnVotesOnly) {
  Workflow wf(Taxonomy::Default());
  wf.CreateBatch(SmallBatch("b", 5));
  wf.SubmitVote("b", V("ann2", "b-1", LabelSet::Of({kA})));
  auto const page = wf.Page("b", "ann2", 1, 2);
  ASSERT_EQ(page.size(), 2u);
  EXPECT_EQ(page[0].instance.id, "b-1");
  ASSERT_TRUE(page[0].my_vote.has_value());
  EXPECT_FALSE(page[1].my_vote.has_value());
  EXPECT_FALSE(wf.Page("b", "ann1", 1, 1)[0].my_vote.has_value());
  EXPECT_TRUE(wf.Page("b", "ann1", 10, 5).empty());
}

TEST(WorkflowTest, BatchThresholdOverridesPreset) {
  Workflow wf(Taxonomy::Default());
  auto spec = SmallBatch("t", 1, 0.9);
  spec.phase = Phase::kTrial;
  EXPECT_EQ(wf.CreateBatch(spec).gate_threshold, 0.9);
  auto preset = SmallBatch("u", 1);
  preset.phase = Phase::kTrial;
  EXPECT_EQ(wf.CreateBatch(preset).gate_threshold, 0.5);
}

TEST(BatchKappaTest, ReducesVotesToRiskiestCategory) {
  std::vector<std::string> ids = {"i1", "i2"};
  std::vector<Vote> votes = {
      V("a", "i1", LabelSet::Of({kA, kB})), V("b", "i1", LabelSet::Of({kA})),
      V("c", "i1", LabelSet::Of({kA})),     V("a", "i2", LabelSet::Of({kB})),
      V("b", "i2", LabelSet::Of({kB})),     V("c", "i2", LabelSet::Of({kB})),
  };
  auto const k = ComputeBatchKappa(ids, votes, Taxonomy::Default());
  EXPECT_EQ(k.overall.kappa, 1.0);
  EXPECT_TRUE(k.per_category[IndexOf(kB)].has_value());
  EXPECT_FALSE(k.per_category[IndexOf(kC)].has_value());
  votes.pop_back();
  EXPECT_EQ(CodeOf([&] { ComputeBatchKappa(ids, votes, Taxonomy::Default()); }),
            ErrorCode::kUnevenRaters);
}

TEST(VoteJsonTest, RoundTrip) {
  auto const v = Vote{"a", "i", LabelSet::Of({kA, kB}), 17};
  auto const back = VoteFromJson(VoteToJson(v));
  EXPECT_EQ(back.labels, v.labels);
  EXPECT_EQ(back.timestamp_ms, 17);
  EXPECT_THROW(VoteFromJson(Json{{"annotator_id", "a"}}), Error);
}

TEST(IngestTest, DedupKeepsFirstOccurrence) {
  std::vector<evaluation::UtteranceRecord> rows(3);
  rows[0].id = "a";
  rows[0].text = "我 想  自杀";
  rows[1].id = "b";
  rows[1].text = " 我 想 自杀 ";
  rows[2].id = "c";
  rows[2].text = "别的";
  auto const out = Dedup(rows);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].id, "a");
  EXPECT_EQ(out[1].id, "c");
}

TEST(IngestTest, RedactionCorpus) {
  auto const corpus = ReadJsonLines(testing::FixtureDir() / "redaction_corpus.jsonl");
  ASSERT_FALSE(corpus.empty());
  auto const& redactor = Redactor::Default();
  for (auto const& c : corpus) {
    auto const input = c.at("input").get<std::string>();
    EXPECT_EQ(redactor.Apply(input), c.at("expected").get<std::string>()) << input;
  }
}

}  // namespace
}  // namespace triage::annotation
