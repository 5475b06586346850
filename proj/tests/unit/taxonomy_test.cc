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

#include "test_support.h"
#include "triage/common/error.h"
#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage {
namespace {

using taxonomy::RoutingKind;
using taxonomy::Taxonomy;

Taxonomy const& Tax() { return Taxonomy::Default(); }

TEST(LabelSetTest, IrrelevantIsExclusive) {
  EXPECT_NO_THROW(LabelSet::Of({CategoryId::kIrrelevant}));
  try {
    LabelSet::Of({CategoryId::kIrrelevant, CategoryId::kSuicidalPlan});
    FAIL() << "expected kInvalidLabelSet";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidLabelSet);
  }
  EXPECT_THROW(LabelSet::Of(std::vector<CategoryId>{}), Error);
}

TEST(LabelSetTest, ValidMaskCountIs1024) {
  int valid = 0;
  for (unsigned m = 1; m <= LabelSet::kAllBits; ++m) {
    valid += LabelSet::IsValidMask(static_cast<LabelSet::Mask>(m)) ? 1 : 0;
  }
  EXPECT_EQ(valid, 1024);
  EXPECT_FALSE(LabelSet::IsValidMask(0));
  EXPECT_FALSE(LabelSet::IsValidMask(LabelSet::kAllBits + 1));
}

TEST(LabelSetTest, KeysRoundTrip) {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto const s = testing::RandomLabelSet(rng);
    EXPECT_EQ(LabelSet::FromKeys(s.Keys()), s);
  }
  EXPECT_THROW(LabelSet::FromKeys({"no_such_category"}), Error);
}

TEST(TaxonomyTest, DefaultRiskOrder) {
  auto const order = Tax().ByDescendingRisk();
  std::vector<CategoryId> const want = {
      CategoryId::kSuicideAttempt,          CategoryId::kSuicidalPreparatoryAct,
      CategoryId::kSuicidalPlan,            CategoryId::kActiveSuicidalIdeation,
      CategoryId::kPassiveSuicidalIdeation, CategoryId::kSelfInjuryBehavior,
      CategoryId::kSelfInjuryIdeation,      CategoryId::kAggressionAgainstUsers,
      CategoryId::kAggressionAgainstOthers, CategoryId::kExplorationAboutSuicide,
      CategoryId::kIrrelevant,
  };
  EXPECT_EQ(order, want);
  EXPECT_EQ(Tax().RiskRank(CategoryId::kSuicideAttempt), 11);
  EXPECT_EQ(Tax().RiskRank(CategoryId::kIrrelevant), 1);
}

TEST(TaxonomyTest, RiskierIsStrictTotalOrder) {
  for (auto a : kAllCategories) {
    EXPECT_FALSE(Tax().Riskier(a, a));
    for (auto b : kAllCategories) {
      if (a != b) EXPECT_NE(Tax().Riskier(a, b), Tax().Riskier(b, a));
    }
  }
}

TEST(TaxonomyTest, GroupsArePartOfTheDefinition) {
  EXPECT_EQ(taxonomy::GroupOf(CategoryId::kPassiveSuicidalIdeation),
            taxonomy::Group::kSuicidalIdeation);
  EXPECT_EQ(taxonomy::GroupOf(CategoryId::kSelfInjuryBehavior),
            taxonomy::Group::kNonSuicidalIdeation);
}

TEST(TaxonomyTest, RejectsBadConfig) {
  auto doc = Tax().ToJson();
  auto irrelevant_high = doc;
  irrelevant_high["categories"][10]["risk_rank"] = 99;
  EXPECT_THROW(Taxonomy::FromJson(irrelevant_high), Error);

  auto missing = doc;
  missing["categories"].erase(3);
  EXPECT_THROW(Taxonomy::FromJson(missing), Error);

  EXPECT_NO_THROW(Taxonomy::FromJson(doc));
}

TEST(TaxonomyTest, EqualRanksBreakTiesByCategoryOrder) {
  auto doc = Tax().ToJson();
  doc["categories"][1]["risk_rank"] = doc["categories"][0]["risk_rank"];
  auto const t = Taxonomy::FromJson(doc);
  EXPECT_TRUE(t.Riskier(CategoryId::kSuicideAttempt, CategoryId::kSuicidalPreparatoryAct));
  EXPECT_FALSE(t.Riskier(CategoryId::kSuicidalPreparatoryAct, CategoryId::kSuicideAttempt));
}

TEST(RouteTest, HandCases) {
  auto const attempt = Tax().Route(LabelSet::Of({CategoryId::kSuicideAttempt}));
  EXPECT_EQ(attempt.kind, RoutingKind::kEscalate);
  EXPECT_EQ(attempt.trigger, CategoryId::kSuicideAttempt);

  auto const mixed = Tax().Route(
      LabelSet::Of({CategoryId::kSelfInjuryBehavior, CategoryId::kPassiveSuicidalIdeation}));
  EXPECT_EQ(mixed.kind, RoutingKind::kAssess);
  EXPECT_EQ(mixed.trigger, CategoryId::kPassiveSuicidalIdeation);

  auto const none = Tax().Route(LabelSet::Of({CategoryId::kIrrelevant}));
  EXPECT_EQ(none.kind, RoutingKind::kMonitor);
  EXPECT_FALSE(none.trigger.has_value());
}

TEST(RouteTest, EveryValidSubset) {
  for (unsigned m = 1; m <= LabelSet::kAllBits; ++m) {
    auto const labels = LabelSet::FromMask(static_cast<LabelSet::Mask>(m));
    if (!labels) continue;
    auto const r = Tax().Route(*labels);
    bool const has_attempt = labels->Contains(CategoryId::kSuicideAttempt);
    EXPECT_EQ(r.kind == RoutingKind::kEscalate, has_attempt) << m;
    EXPECT_EQ(r.kind == RoutingKind::kMonitor, labels->IsIrrelevantOnly()) << m;
    if (r.kind == RoutingKind::kAssess) {
      ASSERT_TRUE(r.trigger.has_value());
      EXPECT_EQ(*r.trigger, Tax().MaxRisk(*labels));
      for (auto c : labels->Members()) {
        EXPECT_GE(Tax().RiskRank(*r.trigger), Tax().RiskRank(c));
      }
    }
  }
}

TEST(ParseLabelTest, NamesInBothLanguagesAndAliases) {
  for (auto const& c : Tax().categories()) {
    EXPECT_EQ(Tax().ParseLabel(c.name_en), c.id) << c.name_en;
    EXPECT_EQ(Tax().ParseLabel(c.name_zh), c.id) << c.name_zh;
    for (auto const& alias : c.aliases) EXPECT_EQ(Tax().ParseLabel(alias), c.id) << alias;
  }
  EXPECT_EQ(Tax().ParseLabel("  suicidal PLAN. "), CategoryId::kSuicidalPlan);
  EXPECT_EQ(Tax().ParseLabel("something else"), std::nullopt);
}

TEST(ParseLabelTest, MultiLabelAnswers) {
  auto const p = Tax().ParseLabels("Suicidal Plan, Self-injury Behavior");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, LabelSet::Of({CategoryId::kSuicidalPlan, CategoryId::kSelfInjuryBehavior}));

  auto const zh = Tax().ParseLabels("自杀计划、自伤行为");
  ASSERT_TRUE(zh.has_value());
  EXPECT_EQ(*zh, *p);

  EXPECT_FALSE(Tax().ParseLabels("Suicidal Plan, banana").has_value());
  EXPECT_FALSE(Tax().ParseLabels("").has_value());
  EXPECT_FALSE(
      Tax().ParseLabels("Suicide Attempt, Irrelevant to Suicide/Self-injury/Aggressive Behavior")
          .has_value());
}

TEST(ParseLabelTest, FormatThenParseRoundTrips) {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    auto const s = testing::RandomLabelSet(rng);
    for (auto lang : {taxonomy::Language::kEn, taxonomy::Language::kZh}) {
      auto const text = Tax().FormatLabels(s, lang);
      EXPECT_EQ(Tax().ParseLabels(text), s) << text;
    }
  }
}

}  // namespace
}  // namespace triage
