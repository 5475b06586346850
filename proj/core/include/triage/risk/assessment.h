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

#ifndef TRIAGE_RISK_ASSESSMENT_H_
#define TRIAGE_RISK_ASSESSMENT_H_

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace triage::risk {

enum class RiskLevel { kLow, kModerate, kHigh, kSevere };

/// "Low", "Moderate", "High", "Severe".
std::string_view RiskLevelName(RiskLevel level);
std::optional<RiskLevel> RiskLevelFromName(std::string_view name);

enum class RecommendedAction { kContinueSupport, kReferCounselor, kHotline };

/// "ContinueSupport", "ReferCounselor", "Hotline".
std::string_view ActionName(RecommendedAction action);
std::optional<RecommendedAction> ActionFromName(std::string_view name);

/// Severe risk must always be handed to a human.
bool SatisfiesReferralRule(RiskLevel level, RecommendedAction action);

struct ParsedAssessment {
  RiskLevel level;
  RecommendedAction action;
  std::string rationale;
};

/// Reads the constrained answer schema
///   RISK_LEVEL: <level>
///   ACTION: <action>
///   RATIONALE: <text>
/// Keys and keywords are case-insensitive and a full-width colon is accepted.
/// std::nullopt when the level or the action is missing or unknown. A Severe
/// answer paired with ContinueSupport is read as ReferCounselor.
std::optional<ParsedAssessment> ParseAssessment(std::string_view raw);

struct AssessmentReport {
  std::string session_id;
  RiskLevel risk_level = RiskLevel::kSevere;
  RecommendedAction recommended_action = RecommendedAction::kReferCounselor;
  std::string rationale;
  std::string raw_model_output;
  /// True when no parseable answer was obtained and the fail-safe default
  /// (Severe, ReferCounselor) was used.
  bool fail_safe = false;
  int attempts = 0;
};

AssessmentReport FailSafeReport(std::string session_id, std::string raw_output, int attempts);

nlohmann::json ReportToJson(AssessmentReport const& report);
AssessmentReport ReportFromJson(nlohmann::json const& doc);

}  // namespace triage::risk

#endif  // TRIAGE_RISK_ASSESSMENT_H_
