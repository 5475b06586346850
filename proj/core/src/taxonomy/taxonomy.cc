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

#include "triage/taxonomy/taxonomy.h"

#include <algorithm>
#include <bitset>
#include <limits>

#include "triage/common/assets.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"

namespace triage::taxonomy {

namespace {

std::string_view GroupKey(Group g) {
  return g == Group::kSuicidalIdeation ? "suicidal_ideation"
                                       : "non_suicidal_ideation";
}

Error ConfigError(std::string const& what) {
  return Error(ErrorCode::kConfig, "taxonomy: " + what);
}

}  // namespace

Group GroupOf(CategoryId id) {
  return IndexOf(id) <= IndexOf(CategoryId::kPassiveSuicidalIdeation)
             ? Group::kSuicidalIdeation
             : Group::kNonSuicidalIdeation;
}

std::string_view RoutingKindName(RoutingKind kind) {
  switch (kind) {
    case RoutingKind::kEscalate: return "escalate";
    case RoutingKind::kAssess: return "assess";
    case RoutingKind::kMonitor: return "monitor";
  }
  return "unknown";
}

std::vector<std::string> const& DefaultLabelDelimiters() {
  static auto const* delimiters = new std::vector<std::string>{
      ",", "\xEF\xBC\x8C",  // ，
      ";", "\xEF\xBC\x9B",  // ；
      "\xE3\x80\x81",       // 、
      "\n", "\r"};
  return *delimiters;
}

std::string NormalizeLabelText(std::string_view raw) {
  return text::AsciiLower(text::CollapseWhitespace(text::TrimPunctuation(raw)));
}

Taxonomy Taxonomy::FromJson(nlohmann::json const& doc) {
  RejectUnknownKeys(doc, {"version", "enforce_group_ordering", "categories"},
                    "taxonomy");
  Taxonomy t;
  t.enforce_group_ordering_ = doc.value("enforce_group_ordering", true);

  auto const& cats = doc.at("categories");
  if (!cats.is_array() || cats.size() != kCategoryCount) {
    throw ConfigError("expected exactly 11 categories");
  }
  std::bitset<kCategoryCount> seen;
  for (auto const& c : cats) {
    RejectUnknownKeys(c,
                      {"id", "name_zh", "name_en", "group", "risk_rank",
                       "definition", "aliases"},
                      "taxonomy category");
    auto const key = c.at("id").get<std::string>();
    auto id = CategoryFromKey(key);
    if (!id) throw ConfigError("unknown category id '" + key + "'");
    if (seen.test(IndexOf(*id))) throw ConfigError("duplicate id '" + key + "'");
    seen.set(IndexOf(*id));

    Category cat;
    cat.id = *id;
    cat.name_zh = c.at("name_zh").get<std::string>();
    cat.name_en = c.at("name_en").get<std::string>();
    cat.group = GroupOf(*id);
    if (c.at("group").get<std::string>() != GroupKey(cat.group)) {
      throw ConfigError("'" + key + "' must be in group " +
                        std::string(GroupKey(cat.group)));
    }
    cat.risk_rank = c.at("risk_rank").get<int>();
    cat.definition = c.value("definition", std::string{});
    cat.aliases = c.value("aliases", std::vector<std::string>{});
    if (cat.name_zh.empty() || cat.name_en.empty()) {
      throw ConfigError("'" + key + "' needs names in both languages");
    }
    t.categories_[IndexOf(*id)] = std::move(cat);
  }

  auto const irrelevant_rank = t.RiskRank(CategoryId::kIrrelevant);
  for (auto const& c : t.categories_) {
    if (c.risk_rank < irrelevant_rank) {
      throw ConfigError("irrelevant must hold the minimum risk_rank");
    }
  }
  if (t.enforce_group_ordering_) {
    int min_suicidal = std::numeric_limits<int>::max();
    int max_other = std::numeric_limits<int>::min();
    for (auto const& c : t.categories_) {
      if (c.group == Group::kSuicidalIdeation) {
        min_suicidal = std::min(min_suicidal, c.risk_rank);
      } else {
        max_other = std::max(max_other, c.risk_rank);
      }
    }
    if (min_suicidal <= max_other) {
      throw ConfigError(
          "suicidal-ideation categories must outrank every other category "
          "(set enforce_group_ordering=false to override)");
    }
  }
  t.BuildIndex();
  return t;
}

Taxonomy Taxonomy::Load(std::filesystem::path const& path) {
  try {
    return FromJson(ReadJsonFile(path));
  } catch (nlohmann::json::exception const& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Taxonomy const& Taxonomy::Default() {
  static Taxonomy const instance = Load(DefaultAssetDir() / "taxonomy.json");
  return instance;
}

void Taxonomy::BuildIndex() {
  lookup_.clear();
  auto add = [this](std::string_view name, CategoryId id) {
    auto key = NormalizeLabelText(name);
    if (key.empty()) return;
    auto& ids = lookup_[key];
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  };
  for (auto const& c : categories_) {
    add(c.name_zh, c.id);
    add(c.name_en, c.id);
    add(CategoryKey(c.id), c.id);
    for (auto const& alias : c.aliases) add(alias, c.id);
  }
}

bool Taxonomy::Riskier(CategoryId a, CategoryId b) const {
  auto const ra = RiskRank(a);
  auto const rb = RiskRank(b);
  if (ra != rb) return ra > rb;
  return IndexOf(a) < IndexOf(b);
}

CategoryId Taxonomy::MaxRisk(LabelSet labels) const {
  auto members = labels.Members();
  return *std::min_element(members.begin(), members.end(),
                           [this](CategoryId a, CategoryId b) {
                             return Riskier(a, b);
                           });
}

std::vector<CategoryId> Taxonomy::ByDescendingRisk() const {
  std::vector<CategoryId> out(kAllCategories.begin(), kAllCategories.end());
  std::sort(out.begin(), out.end(),
            [this](CategoryId a, CategoryId b) { return Riskier(a, b); });
  return out;
}

std::optional<CategoryId> Taxonomy::ParseLabel(std::string_view raw) const {
  auto const key = NormalizeLabelText(raw);
  auto it = lookup_.find(key);
  if (it == lookup_.end() || it->second.size() != 1) return std::nullopt;
  return it->second.front();
}

Prediction Taxonomy::ParseLabels(
    std::string_view raw, std::vector<std::string> const& delimiters) const {
  LabelSet::Mask mask = 0;
  for (auto const& fragment : text::SplitAny(raw, delimiters)) {
    if (NormalizeLabelText(fragment).empty()) continue;
    auto id = ParseLabel(fragment);
    if (!id) return std::nullopt;
    mask |= static_cast<LabelSet::Mask>(LabelSet::Mask{1} << IndexOf(*id));
  }
  return LabelSet::FromMask(mask);
}

std::string Taxonomy::FormatLabels(LabelSet labels, Language lang,
                                   std::string_view separator) const {
  std::vector<std::string> names;
  for (auto id : labels.Members()) names.push_back(category(id).name(lang));
  return text::Join(names, separator);
}

RoutingAction Taxonomy::Route(LabelSet labels) const {
  if (labels.Contains(CategoryId::kSuicideAttempt)) {
    return {RoutingKind::kEscalate, CategoryId::kSuicideAttempt};
  }
  if (labels.IsIrrelevantOnly()) return {RoutingKind::kMonitor, std::nullopt};
  return {RoutingKind::kAssess, MaxRisk(labels)};
}

nlohmann::json Taxonomy::ToJson() const {
  nlohmann::json cats = nlohmann::json::array();
  for (auto const& c : categories_) {
    cats.push_back({{"id", CategoryKey(c.id)},
                    {"name_zh", c.name_zh},
                    {"name_en", c.name_en},
                    {"group", GroupKey(c.group)},
                    {"risk_rank", c.risk_rank},
                    {"definition", c.definition},
                    {"aliases", c.aliases}});
  }
  return {{"version", 1},
          {"enforce_group_ordering", enforce_group_ordering_},
          {"categories", cats}};
}

}  // namespace triage::taxonomy
