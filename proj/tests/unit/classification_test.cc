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

#include <cstdlib>
#include <filesystem>
#include <random>

#include "test_support.h"
#include "triage/classification/cassette.h"
#include "triage/classification/classifier.h"
#include "triage/classification/prompt.h"
#include "triage/classification/rule_baseline.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::classification {
namespace {

using taxonomy::Language;
using taxonomy::Taxonomy;
using triage::testing::ScriptedBackend;
using triage::testing::SourceAssetDir;

Taxonomy const& Tax() { return Taxonomy::Default(); }

constexpr char kGoldenUtterance[] = "最近总是睡不着，觉得活着没意思。";

std::vector<Exemplar> Bank() { return LoadExemplars(SourceAssetDir() / "exemplars.json"); }

std::string Render(PromptKind kind, Language lang) {
  auto const prompt = PromptTemplate::Load(SourceAssetDir(), kind, lang);
  auto const bank = Bank();
  if (kind == PromptKind::kZeroShot) return RenderPrompt(prompt, kGoldenUtterance, std::nullopt, Tax());
  return RenderPrompt(prompt, kGoldenUtterance, std::span<Exemplar const>(bank), Tax());
}

TEST(RenderTemplateTest, SinglePassSubstitution) {
  EXPECT_EQ(RenderTemplate("a {{x}} b {{y}}", {{"x", "{{y}}"}, {"y", "1"}}), "a {{y}} b 1");
  EXPECT_THROW(RenderTemplate("{{missing}}", {}), Error);
  EXPECT_EQ(RenderTemplate("{{x}}", {{"x", "1"}, {"unused", "2"}}), "1");
  EXPECT_EQ(PlaceholdersIn("{{a}} {{b}} {{a}}"), (std::vector<std::string>{"a", "b", "a"}));
}

TEST(PromptTest, SlotsAreValidated) {
  PromptTemplate zero{PromptKind::kZeroShot, Language::kEn, "{{taxonomy}} {{utterance}}"};
  EXPECT_NO_THROW(zero.Validate());
  PromptTemplate zero_with_exemplars{PromptKind::kZeroShot, Language::kEn,
                                     "{{taxonomy}} {{exemplars}} {{utterance}}"};
  EXPECT_THROW(zero_with_exemplars.Validate(), Error);
  PromptTemplate few_without{PromptKind::kFewShot, Language::kEn, "{{taxonomy}} {{utterance}}"};
  EXPECT_THROW(few_without.Validate(), Error);
}

TEST(PromptTest, FewShotNeedsTheFullBank) {
  auto const prompt = PromptTemplate::Load(SourceAssetDir(), PromptKind::kFewShot, Language::kEn);
  auto bank = Bank();
  ASSERT_EQ(bank.size(), kExemplarBankSize);
  bank.pop_back();
  EXPECT_THROW(RenderPrompt(prompt, "x", std::span<Exemplar const>(bank), Tax()), Error);
  EXPECT_THROW(RenderPrompt(prompt, "x", std::nullopt, Tax()), Error);

  auto const zero = PromptTemplate::Load(SourceAssetDir(), PromptKind::kZeroShot, Language::kEn);
  EXPECT_THROW(RenderPrompt(zero, "x", std::span<Exemplar const>(bank), Tax()), Error);
}

TEST(PromptTest, FewShotContainsEveryExemplarInOrder) {
  for (auto lang : {Language::kZh, Language::kEn}) {
    auto const text = Render(PromptKind::kFewShot, lang);
    std::size_t at = 0;
    for (auto const& ex : Bank()) {
      auto const found = text.find(ex.utterance, at);
      ASSERT_NE(found, std::string::npos) << ex.utterance;
      at = found + ex.utterance.size();
    }
    EXPECT_NE(text.find(kGoldenUtterance, at), std::string::npos);
  }
}

TEST(PromptTest, TaxonomyBlockListsEveryCategory) {
  auto const block = RenderTaxonomyBlock(Tax(), Language::kEn);
  for (auto const& c : Tax().categories()) {
    EXPECT_NE(block.find(c.name_en), std::string::npos) << c.name_en;
  }
}

// Set TRIAGE_UPDATE_GOLDENS=1 to rewrite the files after an intended change.
TEST(PromptTest, MatchesGoldenFiles) {
  bool const update = std::getenv("TRIAGE_UPDATE_GOLDENS") != nullptr;
  for (auto kind : {PromptKind::kZeroShot, PromptKind::kFewShot}) {
    for (auto lang : {Language::kZh, Language::kEn}) {
      auto const name = "classify_" + std::string(PromptKindName(kind)) +
                        (lang == Language::kZh ? ".zh.txt" : ".en.txt");
      auto const path = triage::testing::FixtureDir() / "golden" / name;
      auto const rendered = Render(kind, lang);
      if (update) {
        std::filesystem::create_directories(path.parent_path());
        WriteTextFileAtomic(path, rendered);
      }
      ASSERT_TRUE(std::filesystem::exists(path)) << path;
      EXPECT_EQ(rendered, ReadTextFile(path)) << name;
      EXPECT_EQ(rendered, Render(kind, lang));
    }
  }
}

TEST(RuleBaselineTest, KnownPatterns) {
  auto const& table = RuleTable::Default();
  EXPECT_EQ(RuleBaseline("我自杀未遂过", table), LabelSet::Of({CategoryId::kSuicideAttempt}));
  EXPECT_EQ(RuleBaseline("我想自杀", table), LabelSet::Of({CategoryId::kActiveSuicidalIdeation}));
  EXPECT_EQ(RuleBaseline("有时候觉得死了就好了", table),
            LabelSet::Of({CategoryId::kPassiveSuicidalIdeation}));
  EXPECT_EQ(RuleBaseline("昨天又割手臂了，还想自杀", table),
            LabelSet::Of({CategoryId::kSelfInjuryBehavior, CategoryId::kActiveSuicidalIdeation}));
  EXPECT_EQ(RuleBaseline("", table), LabelSet::Of({CategoryId::kIrrelevant}));
  EXPECT_EQ(RuleBaseline("今天天气不错", table), LabelSet::Of({CategoryId::kIrrelevant}));
}

TEST(RuleBaselineTest, TermMatching) {
  EXPECT_TRUE(ContainsTerm("I said NO", "no"));
  EXPECT_FALSE(ContainsTerm("I know", "no"));
  EXPECT_TRUE(ContainsTerm("我没有", "没有"));
  auto const& table = RuleTable::Default();
  EXPECT_EQ(ClassifyAnswer("没有", table), AnswerPolarity::kNegative);
  EXPECT_EQ(ClassifyAnswer("有", table), AnswerPolarity::kAffirmative);
  EXPECT_EQ(ClassifyAnswer("随便吧", table), AnswerPolarity::kUnclear);
}

TEST(RuleBaselineTest, BackendAnswersParseBack) {
  RuleBackend backend(RuleTable::Default(), Tax());
  ChatRequest req;
  req.hints["utterance"] = "我吞了安眠药，又想自杀";
  auto const parsed = Tax().ParseLabels(backend.Complete(req));
  ASSERT_TRUE(parsed.has_value());
  EXPECT_TRUE(parsed->Contains(CategoryId::kSuicideAttempt));
  EXPECT_TRUE(parsed->Contains(CategoryId::kActiveSuicidalIdeation));
}

TEST(RequestHashTest, CoversWireFieldsOnly) {
  ChatRequest a;
  a.model = "m";
  a.user = "hello";
  auto b = a;
  b.hints["utterance"] = "ignored";
  b.sample_index = 4;
  EXPECT_EQ(RequestHash(a), RequestHash(b));
  b.temperature = 0.5;
  EXPECT_NE(RequestHash(a), RequestHash(b));
  EXPECT_EQ(RequestHash(a).size(), 64u);
}

TEST(CassetteTest, RecordThenReplay) {
  ScriptedBackend scripted({"Suicidal Plan", "Irrelevant to Suicide/Self-injury/Aggressive Behavior",
                            "Suicidal Plan"});
  RecordingBackend recorder(scripted);
  ChatRequest req;
  req.user = "u";
  for (int s = 0; s < 3; ++s) {
    req.sample_index = s;
    recorder.Complete(req);
  }
  auto const cassette = recorder.cassette();
  ASSERT_EQ(cassette.records().size(), 3u);

  auto const reparsed = Cassette::Parse(cassette.Serialize(), "memory");
  ReplayBackend replay(reparsed);
  req.sample_index = 1;
  EXPECT_EQ(replay.Complete(req), "Irrelevant to Suicide/Self-injury/Aggressive Behavior");
  req.sample_index = 7;
  try {
    replay.Complete(req);
    FAIL() << "expected a miss";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  req.sample_index = 0;
  req.user = "never recorded";
  EXPECT_THROW(replay.Complete(req), Error);
}

TEST(CassetteTest, RejectsMalformedFiles) {
  EXPECT_THROW(Cassette::Parse("{not json}\n", "bad"), Error);
  EXPECT_THROW(Cassette::Parse("{\"response\": \"x\"}\n", "bad"), Error);
}

ClassifierConfig Config(int rounds, int retries = 0) {
  ClassifierConfig c;
  c.rounds = rounds;
  c.max_retries_on_unparseable = retries;
  return c;
}

Classifier ZeroShot() {
  return Classifier(Tax(), PromptTemplate::Load(SourceAssetDir(), PromptKind::kZeroShot,
                                                Language::kEn));
}

TEST(ClassifierTest, OneVerdictPerRoundInOrder) {
  ScriptedBackend backend({"Suicidal Plan", "Suicidal Plan, Self-injury Behavior", "banana"});
  auto const verdicts = ZeroShot().Classify("text", Config(3), backend);
  ASSERT_EQ(verdicts.size(), 3u);
  EXPECT_EQ(verdicts[0].round_index, 1);
  EXPECT_EQ(verdicts[0].labels, LabelSet::Of({CategoryId::kSuicidalPlan}));
  EXPECT_TRUE(verdicts[1].labels->IsMultiLabel());
  // Unparseable stays explicit and never turns into Irrelevant.
  EXPECT_FALSE(verdicts[2].labels.has_value());
  EXPECT_EQ(verdicts[2].raw_text, "banana");
  auto const reqs = backend.requests();
  EXPECT_EQ(reqs[0].sample_index, 0);
  EXPECT_EQ(reqs[2].sample_index, 2);
  EXPECT_EQ(reqs[0].user, reqs[2].user);
}

TEST(ClassifierTest, RetriesUnparseableAnswers) {
  ScriptedBackend backend({"???", "Suicidal Plan"});
  auto const verdicts = ZeroShot().Classify("text", Config(1, 2), backend);
  ASSERT_EQ(verdicts.size(), 1u);
  EXPECT_EQ(verdicts[0].labels, LabelSet::Of({CategoryId::kSuicidalPlan}));
  auto const reqs = backend.requests();
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs[1].sample_index, 1);
}

TEST(ClassifierTest, BackendFailureSurfaces) {
  ScriptedBackend backend({ScriptedBackend::kFail});
  try {
    ZeroShot().Classify("text", Config(1), backend);
    FAIL() << "expected kBackendUnavailable";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

TEST(ClassifierTest, ParallelRoundsMatchSequential) {
  RuleBackend rule(RuleTable::Default(), Tax());
  RecordingBackend recorder(rule);
  auto const classifier = ZeroShot();
  auto const seq = classifier.Classify("我想自杀", Config(3), recorder);
  ReplayBackend replay(recorder.cassette());
  auto config = Config(3);
  config.parallel_rounds = true;
  auto const par = classifier.Classify("我想自杀", config, replay);
  ASSERT_EQ(seq.size(), par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(seq[i].round_index, par[i].round_index);
    EXPECT_EQ(seq[i].raw_text, par[i].raw_text);
    EXPECT_EQ(seq[i].labels, par[i].labels);
  }
}

TEST(ClassifierTest, ConfigValidation) {
  EXPECT_THROW(Config(0).Validate(), Error);
  auto c = Config(1);
  c.top_p = 0;
  EXPECT_THROW(c.Validate(), Error);
}

}  // namespace
}  // namespace triage::classification
