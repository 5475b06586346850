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

#include "triage/risk/assessment.h"

#include <array>
#include <utility>

#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"

namespace triage::risk {

namespace {

constexpr std::array<std::pair<RiskLevel, std::string_view>, 4> kLevels = {{
    {RiskLevel::kLow, "Low"},
    {RiskLevel::kModerate, "Moderate"},
    {RiskLevel::kHigh, "High"},
    {RiskLevel::kSevere, "Severe"},
}};

constexpr std::array<std::pair<RecommendedAction, std::string_view>, 3> kActions = {{
    {RecommendedAction::kContinueSupport, "ContinueSupport"},
    {RecommendedAction::kReferCounselor, "ReferCounselor"},
    {RecommendedAction::kHotline, "Hotline"},
}};

// Returns the value after "KEY:" on a line starting with the key.
std::optional<std::string> FieldValue(std::string_view line, std::string_view key) {
  auto const trimmed = text::Trim(line);
  if (text::AsciiLower(trimmed.substr(0, key.size())) != key) return std::nullopt;
  std::string_view rest = std::string_view(trimmed).substr(key.size());
  while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
    rest.remove_prefix(1);
  }
  if (rest.starts_with(":")) {
    rest.remove_prefix(1);
  } else if (rest.starts_with("\xEF\xBC\x9A")) {  // full-width colon
    rest.remove_prefix(3);
  } else {
    return std::nullopt;
  }
  return text::Trim(rest);
}

}  // namespace

std::string_view RiskLevelName(RiskLevel level) {
  for (auto const& [l, name] : kLevels) {
    if (l == level) return name;
  }
  return "Severe";
}

std::optional<RiskLevel> RiskLevelFromName(std::string_view name) {
  auto const lowered = text::AsciiLower(text::TrimPunctuation(name));
  for (auto const& [l, n] : kLevels) {
    if (text::AsciiLower(n) == lowered) return l;
  }
  return std::nullopt;
}

std::string_view ActionName(RecommendedAction action) {
  for (auto const& [a, name] : kActions) {
    if (a == action) return name;
  }
  return "ReferCounselor";
}

std::optional<RecommendedAction> ActionFromName(std::string_view name) {
  auto const lowered = text::AsciiLower(text::TrimPunctuation(name));
  for (auto const& [a, n] : kActions) {
    if (text::AsciiLower(n) == lowered) return a;
  }
  return std::nullopt;
}

bool SatisfiesReferralRule(RiskLevel level, RecommendedAction action) {
  return level != RiskLevel::kSevere || action != RecommendedAction::kContinueSupport;
}

std::optional<ParsedAssessment> ParseAssessment(std::string_view raw) {
  std::optional<RiskLevel> level;
  std::optional<RecommendedAction> action;
  std::string rationale;
  for (auto const& line : text::SplitAny(raw, {"\n"})) {
    if (auto v = FieldValue(line, "risk_level")) {
      auto parsed = RiskLevelFromName(*v);
      if (!parsed || (level && *level != *parsed)) return std::nullopt;
      level = parsed;
    } else if (auto a = FieldValue(line, "action")) {
      auto parsed = ActionFromName(*a);
      if (!parsed || (action && *action != *parsed)) return std::nullopt;
      action = parsed;
    } else if (auto r = FieldValue(line, "rationale")) {
      rationale = *r;
    }
  }
  if (!level || !action) return std::nullopt;
  if (!SatisfiesReferralRule(*level, *action)) action = RecommendedAction::kReferCounselor;
  return ParsedAssessment{*level, *action, std::move(rationale)};
}

AssessmentReport FailSafeReport(std::string session_id, std::string raw_output, int attempts) {
  AssessmentReport r;
  r.session_id = std::move(session_id);
  r.risk_level = RiskLevel::kSevere;
  r.recommended_action = RecommendedAction::kReferCounselor;
  r.rationale = "no parseable assessment; defaulting to counselor referral";
  r.raw_model_output = std::move(raw_output);
  r.fail_safe = true;
  r.attempts = attempts;
  return r;
}

Json ReportToJson(AssessmentReport const& r) {
  return {{"session_id", r.session_id},
          {"risk_level", RiskLevelName(r.risk_level)},
          {"recommended_action", ActionName(r.recommended_action)},
          {"rationale", r.rationale},
          {"raw_model_output", r.raw_model_output},
          {"fail_safe", r.fail_safe},
          {"attempts", r.attempts}};
}

AssessmentReport ReportFromJson(Json const& doc) {
  AssessmentReport r;
  try {
    r.session_id = doc.at("session_id").get<std::string>();
    auto level = RiskLevelFromName(doc.at("risk_level").get<std::string>());
    auto action = ActionFromName(doc.at("recommended_action").get<std::string>());
    if (!level || !action) throw Error(ErrorCode::kParse, "assessment report: bad level/action");
    r.risk_level = *level;
    r.recommended_action = *action;
    r.rationale = doc.at("rationale").get<std::string>();
    r.raw_model_output = doc.at("raw_model_output").get<std::string>();
    r.fail_safe = doc.at("fail_safe").get<bool>();
    r.attempts = doc.at("attempts").get<int>();
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kParse, std::string("assessment report: ") + e.what());
  }
  return r;
}

}  // namespace triage::risk
