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

#ifndef TRIAGE_TAXONOMY_TAXONOMY_H_
#define TRIAGE_TAXONOMY_TAXONOMY_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/taxonomy/label_set.h"

namespace triage::taxonomy {

enum class Group { kSuicidalIdeation, kNonSuicidalIdeation };
enum class Language { kZh, kEn };

/// The group each category belongs to is part of the taxonomy's definition,
/// not configuration.
Group GroupOf(CategoryId id);

struct Category {
  CategoryId id;
  std::string name_zh;
  std::string name_en;
  Group group;
  int risk_rank;
  std::string definition;
  std::vector<std::string> aliases;

  std::string const& name(Language lang) const {
    return lang == Language::kZh ? name_zh : name_en;
  }
};

enum class RoutingKind { kEscalate, kAssess, kMonitor };

std::string_view RoutingKindName(RoutingKind kind);

struct RoutingAction {
  RoutingKind kind;
  /// Absent exactly when kind == kMonitor.
  std::optional<CategoryId> trigger;

  friend bool operator==(RoutingAction const&, RoutingAction const&) = default;
};

/// Default delimiters separating labels in a multi-label model answer.
std::vector<std::string> const& DefaultLabelDelimiters();

/// Lower-cases Latin script, trims whitespace and punctuation at both ends and
/// collapses internal whitespace.
std::string NormalizeLabelText(std::string_view raw);

/// The loaded taxonomy: names, definitions, risk ordering and aliases.
/// Immutable after construction and safe to share between threads.
class Taxonomy {
 public:
  /// Validates and builds from the config document. Throws Error(kConfig).
  static Taxonomy FromJson(nlohmann::json const& doc);
  static Taxonomy Load(std::filesystem::path const& path);
  /// The shipped default from DefaultAssetDir(), loaded once.
  static Taxonomy const& Default();

  Category const& category(CategoryId id) const {
    return categories_[IndexOf(id)];
  }
  std::span<Category const> categories() const { return categories_; }

  int RiskRank(CategoryId id) const { return category(id).risk_rank; }

  /// Strict total order: higher rank first, ties broken by id order (lower
  /// id is riskier).
  bool Riskier(CategoryId a, CategoryId b) const;
  CategoryId MaxRisk(LabelSet labels) const;
  /// All categories sorted from riskiest to least risky.
  std::vector<CategoryId> ByDescendingRisk() const;

  /// Exact normalized match against display names in both languages and the
  /// alias table. std::nullopt when nothing or more than one category matches.
  std::optional<CategoryId> ParseLabel(std::string_view raw) const;

  /// Multi-label parse: split on delimiters, parse every non-blank fragment,
  /// take the union. Any unparseable fragment, or a union that is not a valid
  /// LabelSet, makes the whole answer unparseable.
  Prediction ParseLabels(std::string_view raw,
                         std::vector<std::string> const& delimiters =
                             DefaultLabelDelimiters()) const;

  std::string FormatLabels(LabelSet labels, Language lang = Language::kEn,
                           std::string_view separator = ", ") const;

  RoutingAction Route(LabelSet labels) const;

  nlohmann::json ToJson() const;

 private:
  Taxonomy() = default;
  void BuildIndex();

  std::array<Category, kCategoryCount> categories_;
  bool enforce_group_ordering_ = true;
  std::map<std::string, std::vector<CategoryId>, std::less<>> lookup_;
};

}  // namespace triage::taxonomy

#endif  // TRIAGE_TAXONOMY_TAXONOMY_H_
