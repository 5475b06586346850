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

#include "triage/risk/session.h"

#include <algorithm>
#include <array>
#include <utility>

#include "triage/classification/prompt.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"

namespace triage::risk {

namespace {

constexpr std::size_t kExcerptChars = 200;

constexpr std::array<std::pair<SessionState, std::string_view>, 5> kStates = {{
    {SessionState::kScreening, "screening"},
    {SessionState::kAwaitingUser, "awaiting_user"},
    {SessionState::kAssessing, "assessing"},
    {SessionState::kClosed, "closed"},
    {SessionState::kEscalated, "escalated"},
}};

std::string Excerpt(std::string_view s) {
  std::size_t pos = 0;
  for (std::size_t n = 0; n < kExcerptChars && pos < s.size(); ++n) {
    text::NextCodePoint(s, pos);
  }
  return std::string(s.substr(0, pos));
}

void Transition(RiskSession& s, SessionState to) {
  if (!IsLegalTransition(s.state, to)) {
    throw Error(ErrorCode::kWrongState,
                "session '" + s.session_id + "' cannot go from " +
                    std::string(SessionStateName(s.state)) + " to " +
                    std::string(SessionStateName(to)));
  }
  s.state = to;
}

void RequireState(RiskSession const& s, SessionState want) {
  if (s.state != want) {
    throw Error(ErrorCode::kWrongState, "session '" + s.session_id + "' is " +
                                            std::string(SessionStateName(s.state)) +
                                            ", expected " +
                                            std::string(SessionStateName(want)));
  }
}

Json TurnToJson(Turn const& t) {
  Json doc = {{"speaker", t.speaker == Speaker::kUser ? "user" : "system"},
              {"text", t.text},
              {"timestamp_ms", t.timestamp_ms}};
  if (!t.qtype.empty()) doc["qtype"] = t.qtype;
  if (!t.utterance_id.empty()) doc["utterance_id"] = t.utterance_id;
  return doc;
}

Turn TurnFromJson(Json const& doc) {
  Turn t;
  t.speaker = doc.at("speaker").get<std::string>() == "user" ? Speaker::kUser : Speaker::kSystem;
  t.text = doc.at("text").get<std::string>();
  t.timestamp_ms = doc.at("timestamp_ms").get<std::int64_t>();
  t.qtype = doc.value("qtype", std::string());
  t.utterance_id = doc.value("utterance_id", std::string());
  return t;
}

CategoryId CategoryFromJson(Json const& v) {
  auto id = CategoryFromKey(v.get<std::string>());
  if (!id) throw Error(ErrorCode::kParse, "unknown category " + v.dump());
  return *id;
}

}  // namespace

std::string_view SessionStateName(SessionState state) {
  for (auto const& [s, name] : kStates) {
    if (s == state) return name;
  }
  return "screening";
}

std::optional<SessionState> SessionStateFromName(std::string_view name) {
  for (auto const& [s, n] : kStates) {
    if (n == name) return s;
  }
  return std::nullopt;
}

bool IsLegalTransition(SessionState from, SessionState to) {
  switch (from) {
    case SessionState::kScreening:
      return to == SessionState::kAwaitingUser || to == SessionState::kAssessing;
    case SessionState::kAwaitingUser:
      return to == SessionState::kScreening || to == SessionState::kEscalated;
    case SessionState::kAssessing:
      return to == SessionState::kClosed;
    case SessionState::kClosed:
    case SessionState::kEscalated:
      return false;
  }
  return false;
}

std::string EscalationKey(std::string_view utterance_id) {
  return "esc-" + std::string(utterance_id);
}

Json EscalationToJson(EscalationEvent const& e) {
  return {{"idempotency_key", e.idempotency_key},
          {"utterance_id", e.utterance_id},
          {"user_id", e.user_id},
          {"session_id", e.session_id},
          {"category", CategoryKey(e.category)},
          {"hotline_message", e.hotline_message},
          {"transcript_excerpt", e.transcript_excerpt},
          {"created_at_ms", e.created_at_ms}};
}

EscalationEvent EscalationFromJson(Json const& doc) {
  EscalationEvent e;
  try {
    e.idempotency_key = doc.at("idempotency_key").get<std::string>();
    e.utterance_id = doc.at("utterance_id").get<std::string>();
    e.user_id = doc.at("user_id").get<std::string>();
    e.session_id = doc.at("session_id").get<std::string>();
    e.category = CategoryFromJson(doc.at("category"));
    e.hotline_message = doc.at("hotline_message").get<std::string>();
    e.transcript_excerpt = doc.at("transcript_excerpt").get<std::string>();
    e.created_at_ms = doc.at("created_at_ms").get<std::int64_t>();
  } catch (Json::exception const& ex) {
    throw Error(ErrorCode::kParse, std::string("escalation: ") + ex.what());
  }
  return e;
}

Json CounselorNotificationBody(EscalationEvent const& e) {
  return {{"kind", "escalation"},
          {"idempotency_key", e.idempotency_key},
          {"session_id", e.session_id},
          {"utterance_id", e.utterance_id},
          {"user_id", e.user_id},
          {"category", CategoryKey(e.category)},
          {"transcript_excerpt", e.transcript_excerpt}};
}

Json SessionToJson(RiskSession const& s) {
  Json turns = Json::array();
  for (auto const& t : s.turns) turns.push_back(TurnToJson(t));
  Json doc = {{"session_id", s.session_id},
              {"user_id", s.user_id},
              {"trigger_utterance_id", s.trigger_utterance_id},
              {"detected_category", CategoryKey(s.detected_category)},
              {"state", SessionStateName(s.state)},
              {"turns", std::move(turns)},
              {"questions_asked", s.questions_asked},
              {"created_at_ms", s.created_at_ms}};
  if (s.report) doc["report"] = ReportToJson(*s.report);
  if (s.escalation) doc["escalation"] = EscalationToJson(*s.escalation);
  return doc;
}

RiskSession SessionFromJson(Json const& doc) {
  RiskSession s;
  try {
    s.session_id = doc.at("session_id").get<std::string>();
    s.user_id = doc.at("user_id").get<std::string>();
    s.trigger_utterance_id = doc.at("trigger_utterance_id").get<std::string>();
    s.detected_category = CategoryFromJson(doc.at("detected_category"));
    auto state = SessionStateFromName(doc.at("state").get<std::string>());
    if (!state) throw Error(ErrorCode::kParse, "unknown session state");
    s.state = *state;
    for (auto const& t : doc.at("turns")) s.turns.push_back(TurnFromJson(t));
    s.questions_asked = doc.at("questions_asked").get<std::vector<std::string>>();
    s.created_at_ms = doc.at("created_at_ms").get<std::int64_t>();
    if (doc.contains("report")) s.report = ReportFromJson(doc["report"]);
    if (doc.contains("escalation")) s.escalation = EscalationFromJson(doc["escalation"]);
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kParse, std::string("session: ") + e.what());
  }
  return s;
}

RiskTemplates RiskTemplates::Load(std::filesystem::path const& asset_dir,
                                  taxonomy::Language language) {
  auto const suffix = language == taxonomy::Language::kZh ? ".zh.txt" : ".en.txt";
  auto const prompts = asset_dir / "prompts";
  return {ReadTextFile(prompts / ("counselor" + std::string(suffix))),
          ReadTextFile(prompts / ("assess" + std::string(suffix))),
          ReadTextFile(asset_dir / ("hotline_message" + std::string(suffix))),
          text::Trim(ReadTextFile(prompts / ("counselor_wrapper" + std::string(suffix))))};
}

RiskEngine::RiskEngine(taxonomy::Taxonomy const& taxonomy, ScreeningBank const& bank,
                       RiskTemplates templates, RiskConfig config)
    : taxonomy_(taxonomy), bank_(bank), templates_(std::move(templates)),
      config_(std::move(config)) {
  if (config_.assess_max_attempts < 1) {
    throw Error(ErrorCode::kConfig, "assess_max_attempts must be >= 1");
  }
}

std::string RiskEngine::HotlineMessage() const {
  return text::Trim(classification::RenderTemplate(
      templates_.hotline, {{"hotline_number", config_.hotline_number}}));
}

EscalationEvent RiskEngine::MakeEscalation(std::string const& utterance_id,
                                           std::string const& user_id,
                                           std::string const& session_id, std::string excerpt,
                                           std::int64_t now_ms) const {
  EscalationEvent e;
  e.idempotency_key = EscalationKey(utterance_id);
  e.utterance_id = utterance_id;
  e.user_id = user_id;
  e.session_id = session_id;
  e.hotline_message = HotlineMessage();
  e.transcript_excerpt = Excerpt(excerpt);
  e.created_at_ms = now_ms;
  return e;
}

std::variant<RiskSession, EscalationEvent> RiskEngine::Start(StartRequest const& request,
                                                             std::int64_t now_ms) const {
  auto const action = taxonomy_.Route(request.verdict);
  switch (action.kind) {
    case taxonomy::RoutingKind::kMonitor:
      throw Error(ErrorCode::kInvalidArgument,
                  "an Irrelevant-only verdict does not start a risk session");
    case taxonomy::RoutingKind::kEscalate:
      return MakeEscalation(request.utterance_id, request.user_id, "", request.text, now_ms);
    case taxonomy::RoutingKind::kAssess:
      break;
  }
  RiskSession s;
  s.session_id = request.session_id;
  s.user_id = request.user_id;
  s.trigger_utterance_id = request.utterance_id;
  s.detected_category = *action.trigger;
  s.state = SessionState::kScreening;
  s.created_at_ms = now_ms;
  s.turns.push_back({Speaker::kUser, request.text, now_ms, "", request.utterance_id});
  return s;
}

classification::ChatRequest RiskEngine::BaseRequest() const {
  classification::ChatRequest req;
  req.model = config_.model;
  req.temperature = config_.temperature;
  req.top_p = config_.top_p;
  return req;
}

std::string RiskEngine::Transcript(RiskSession const& session) const {
  bool const zh = config_.language == taxonomy::Language::kZh;
  std::vector<std::string> lines;
  for (auto const& t : session.turns) {
    auto const who = t.speaker == Speaker::kUser ? (zh ? "用户：" : "User: ")
                                                 : (zh ? "咨询师：" : "Counselor: ");
    lines.push_back(who + t.text);
  }
  return text::Join(lines, "\n");
}

std::string RiskEngine::Coverage(RiskSession const& session) const {
  bool const zh = config_.language == taxonomy::Language::kZh;
  std::vector<std::string> lines;
  for (auto const& q : bank_.questions()) {
    bool const asked = std::find(session.questions_asked.begin(), session.questions_asked.end(),
                                 q.qtype) != session.questions_asked.end();
    lines.push_back("- " + q.qtype + (zh ? "：" : ": ") +
                    (asked ? (zh ? "已询问" : "asked") : (zh ? "未询问" : "not asked")));
  }
  return text::Join(lines, "\n");
}

std::string RiskEngine::AnswersJson(RiskSession const& session) const {
  Json answers = Json::array();
  for (std::size_t i = 0; i < session.turns.size(); ++i) {
    auto const& t = session.turns[i];
    if (t.speaker != Speaker::kSystem || t.qtype.empty()) continue;
    auto const* q = bank_.Find(t.qtype);
    if (!q || i + 1 >= session.turns.size()) continue;
    auto const& reply = session.turns[i + 1];
    if (reply.speaker != Speaker::kUser) continue;
    answers.push_back({{"qtype", q->qtype},
                       {"reply", reply.text},
                       {"risk_when", RiskWhenName(q->risk_when)},
                       {"raises_to", RiskLevelName(q->raises_to)}});
  }
  return CanonicalDump(answers);
}

std::string RiskEngine::RenderCounselorPrompt(RiskSession const& session,
                                              ScreeningQuestion const& question) const {
  return classification::RenderTemplate(
      templates_.counselor,
      {{"category", taxonomy_.category(session.detected_category).name(config_.language)},
       {"transcript", Transcript(session)},
       {"question", question.text(config_.language)}});
}

std::string RiskEngine::RenderAssessPrompt(RiskSession const& session) const {
  return classification::RenderTemplate(
      templates_.assess,
      {{"category", taxonomy_.category(session.detected_category).name(config_.language)},
       {"transcript", Transcript(session)},
       {"coverage", Coverage(session)}});
}

std::optional<Turn> RiskEngine::NextPrompt(RiskSession& session,
                                           classification::ChatBackend& backend,
                                           std::int64_t now_ms) const {
  RequireState(session, SessionState::kScreening);
  auto const* question = bank_.NextQuestion(session.detected_category, session.questions_asked);
  if (!question) {
    Transition(session, SessionState::kAssessing);
    return std::nullopt;
  }
  auto const& qtext = question->text(config_.language);
  auto req = BaseRequest();
  req.task = classification::Task::kCounselorTurn;
  req.user = RenderCounselorPrompt(session, *question);
  req.hints = {{"question", qtext}, {"wrapper", templates_.wrapper}};
  std::string reply;
  try {
    reply = text::Trim(backend.Complete(req));
  } catch (std::exception const&) {
    reply.clear();
  }
  if (reply.empty()) {
    reply = classification::RenderTemplate(templates_.wrapper, {{"question", qtext}});
  }
  Turn turn{Speaker::kSystem, reply, now_ms, question->qtype, ""};
  session.turns.push_back(turn);
  session.questions_asked.push_back(question->qtype);
  Transition(session, SessionState::kAwaitingUser);
  return turn;
}

std::optional<EscalationEvent> RiskEngine::RecordUserReply(RiskSession& session,
                                                           std::string const& utterance_id,
                                                           std::string const& text,
                                                           Prediction const& reply_verdict,
                                                           std::int64_t now_ms) const {
  RequireState(session, SessionState::kAwaitingUser);
  session.turns.push_back({Speaker::kUser, text, now_ms, "", utterance_id});
  if (reply_verdict && reply_verdict->Contains(CategoryId::kSuicideAttempt)) {
    Transition(session, SessionState::kEscalated);
    session.escalation =
        MakeEscalation(utterance_id, session.user_id, session.session_id, text, now_ms);
    return session.escalation;
  }
  Transition(session, SessionState::kScreening);
  return std::nullopt;
}

AssessmentReport RiskEngine::Assess(RiskSession& session, classification::ChatBackend& backend,
                                    bool force) const {
  if (force && session.state == SessionState::kScreening) {
    Transition(session, SessionState::kAssessing);
  }
  RequireState(session, SessionState::kAssessing);
  auto req = BaseRequest();
  req.task = classification::Task::kAssess;
  req.user = RenderAssessPrompt(session);
  req.hints = {{"answers", AnswersJson(session)}};

  std::optional<AssessmentReport> report;
  std::string last_raw;
  int attempt = 0;
  while (!report && attempt < config_.assess_max_attempts) {
    req.sample_index = attempt++;
    try {
      last_raw = backend.Complete(req);
    } catch (std::exception const& e) {
      last_raw = std::string("backend failure: ") + e.what();
      continue;
    }
    if (auto parsed = ParseAssessment(last_raw)) {
      report = AssessmentReport{session.session_id, parsed->level,  parsed->action,
                                parsed->rationale,  last_raw,       false,
                                attempt};
    }
  }
  if (!report) report = FailSafeReport(session.session_id, last_raw, attempt);
  session.report = report;
  Transition(session, SessionState::kClosed);
  return *report;
}

bool RiskEngine::ShouldAlertCounselor(RiskSession const& session) const {
  return config_.notify_on_aggression_against_users &&
         session.detected_category == CategoryId::kAggressionAgainstUsers;
}

}  // namespace triage::risk
