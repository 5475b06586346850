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

#ifndef TRIAGE_RISK_SCREENING_H_
#define TRIAGE_RISK_SCREENING_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/risk/assessment.h"
#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::risk {

inline constexpr std::size_t kQuestionTypeCount = 9;

/// Which answer polarity indicates risk: "yes" to most questions, "no" to
/// questions about protective factors, support and present safety.
enum class RiskWhen { kAffirmative, kNegative };

std::string_view RiskWhenName(RiskWhen when);

struct ScreeningQuestion {
  std::string qtype;
  std::string text_zh;
  std::string text_en;
  int order_hint = 0;
  RiskWhen risk_when = RiskWhen::kAffirmative;
  /// Level implied by a risky answer.
  RiskLevel raises_to = RiskLevel::kModerate;
  std::set<CategoryId> applicability;

  std::string const& text(taxonomy::Language lang) const {
    return lang == taxonomy::Language::kZh ? text_zh : text_en;
  }
};

/// The screening question bank together with the per-category question order.
class ScreeningBank {
 public:
  /// Expects {"questions": [...], "flows": {category_key: [qtype, ...]}}.
  /// Validates: exactly nine distinct qtypes, every category except
  /// Irrelevant has a non-empty flow of known, distinct qtypes, Irrelevant
  /// has none. Throws Error(kConfig).
  static ScreeningBank FromJson(nlohmann::json const& doc);
  static ScreeningBank Load(std::filesystem::path const& path);
  static ScreeningBank const& Default();

  /// Questions ordered by order_hint.
  std::span<ScreeningQuestion const> questions() const { return questions_; }
  ScreeningQuestion const* Find(std::string_view qtype) const;

  /// Applicable question types for a category, highest priority first.
  std::vector<std::string> const& Flow(CategoryId category) const {
    return flows_[IndexOf(category)];
  }

  /// The highest-priority applicable question not yet asked, or nullptr.
  ScreeningQuestion const* NextQuestion(CategoryId category,
                                        std::span<std::string const> asked) const;

 private:
  std::vector<ScreeningQuestion> questions_;
  std::array<std::vector<std::string>, kCategoryCount> flows_;
};

}  // namespace triage::risk

#endif  // TRIAGE_RISK_SCREENING_H_
