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

#ifndef TRIAGE_RISK_SESSION_H_
#define TRIAGE_RISK_SESSION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/classification/backend.h"
#include "triage/risk/assessment.h"
#include "triage/risk/screening.h"
#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::risk {

enum class SessionState { kScreening, kAwaitingUser, kAssessing, kClosed, kEscalated };

std::string_view SessionStateName(SessionState state);
std::optional<SessionState> SessionStateFromName(std::string_view name);

/// Screening -> AwaitingUser -> Screening ... -> Assessing -> Closed, plus
/// AwaitingUser -> Escalated. Closed and Escalated are terminal.
bool IsLegalTransition(SessionState from, SessionState to);

enum class Speaker { kUser, kSystem };

struct Turn {
  Speaker speaker = Speaker::kSystem;
  std::string text;
  std::int64_t timestamp_ms = 0;
  /// Question type a system turn asks; empty for user turns.
  std::string qtype;
  /// Utterance id of a user turn.
  std::string utterance_id;
};

/// Hotline referral plus counselor notification for one triggering utterance.
struct EscalationEvent {
  /// "esc-" + utterance id: stable across retries and restarts.
  std::string idempotency_key;
  std::string utterance_id;
  std::string user_id;
  /// Empty when escalation happened before any session existed.
  std::string session_id;
  CategoryId category = CategoryId::kSuicideAttempt;
  std::string hotline_message;
  std::string transcript_excerpt;
  std::int64_t created_at_ms = 0;
};

std::string EscalationKey(std::string_view utterance_id);

nlohmann::json EscalationToJson(EscalationEvent const& e);
EscalationEvent EscalationFromJson(nlohmann::json const& doc);

/// Body POSTed to the counselor webhook.
nlohmann::json CounselorNotificationBody(EscalationEvent const& e);

struct RiskSession {
  std::string session_id;
  std::string user_id;
  std::string trigger_utterance_id;
  CategoryId detected_category = CategoryId::kPassiveSuicidalIdeation;
  SessionState state = SessionState::kScreening;
  std::vector<Turn> turns;
  /// Asked question types in asking order; never repeats.
  std::vector<std::string> questions_asked;
  std::int64_t created_at_ms = 0;
  std::optional<AssessmentReport> report;
  std::optional<EscalationEvent> escalation;
};

nlohmann::json SessionToJson(RiskSession const& s);
RiskSession SessionFromJson(nlohmann::json const& doc);

struct RiskConfig {
  taxonomy::Language language = taxonomy::Language::kZh;
  /// Attempts at a parseable assessment before the fail-safe applies.
  int assess_max_attempts = 3;
  std::string hotline_number = "400-161-9995";
  /// Also alert counselors when a session is opened for Aggression against
  /// Users (the user being harmed by others).
  bool notify_on_aggression_against_users = true;
  std::string model;
  double temperature = 1.0;
  double top_p = 1.0;
};

/// Prompt and message templates for one language.
struct RiskTemplates {
  std::string counselor;  // {{category}} {{transcript}} {{question}}
  std::string assess;     // {{category}} {{transcript}} {{coverage}}
  std::string hotline;    // {{hotline_number}}
  std::string wrapper;    // {{question}}; used when the backend fails

  static RiskTemplates Load(std::filesystem::path const& asset_dir,
                            taxonomy::Language language);
};

/// Drives screening dialogues. Holds no per-session state: every call works
/// on the RiskSession it is given, and callers serialize calls per session.
class RiskEngine {
 public:
  RiskEngine(taxonomy::Taxonomy const& taxonomy, ScreeningBank const& bank,
             RiskTemplates templates, RiskConfig config);

  struct StartRequest {
    std::string session_id;
    std::string user_id;
    std::string utterance_id;
    std::string text;
    LabelSet verdict = LabelSet::Of({CategoryId::kIrrelevant});
  };

  /// Escalation when the verdict contains Suicide Attempt, otherwise a
  /// Screening session on the riskiest detected category. Throws
  /// kInvalidArgument for an Irrelevant-only verdict.
  std::variant<RiskSession, EscalationEvent> Start(StartRequest const& request,
                                                   std::int64_t now_ms) const;

  /// Asks the next applicable question. Returns std::nullopt, after moving the
  /// session to Assessing, when no question is left. A backend failure or an
  /// empty answer falls back to the fixed wrapper around the question text.
  std::optional<Turn> NextPrompt(RiskSession& session, classification::ChatBackend& backend,
                                 std::int64_t now_ms) const;

  /// Appends the user's reply. `reply_verdict` is the classification of the
  /// reply; Suicide Attempt escalates the session, anything else (including
  /// an unparseable verdict) returns it to Screening.
  std::optional<EscalationEvent> RecordUserReply(RiskSession& session,
                                                 std::string const& utterance_id,
                                                 std::string const& text,
                                                 Prediction const& reply_verdict,
                                                 std::int64_t now_ms) const;

  /// Produces the assessment and closes the session. `force` allows an
  /// operator to assess a session that is still screening.
  AssessmentReport Assess(RiskSession& session, classification::ChatBackend& backend,
                          bool force = false) const;

  bool ShouldAlertCounselor(RiskSession const& session) const;

  std::string RenderCounselorPrompt(RiskSession const& session,
                                    ScreeningQuestion const& question) const;
  std::string RenderAssessPrompt(RiskSession const& session) const;
  std::string HotlineMessage() const;

  RiskConfig const& config() const { return config_; }
  ScreeningBank const& bank() const { return bank_; }

 private:
  EscalationEvent MakeEscalation(std::string const& utterance_id, std::string const& user_id,
                                 std::string const& session_id, std::string excerpt,
                                 std::int64_t now_ms) const;
  std::string Transcript(RiskSession const& session) const;
  std::string Coverage(RiskSession const& session) const;
  std::string AnswersJson(RiskSession const& session) const;
  classification::ChatRequest BaseRequest() const;

  taxonomy::Taxonomy const& taxonomy_;
  ScreeningBank const& bank_;
  RiskTemplates templates_;
  RiskConfig config_;
};

}  // namespace triage::risk

#endif  // TRIAGE_RISK_SESSION_H_
