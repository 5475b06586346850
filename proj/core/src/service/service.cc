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

#include "triage/service/service.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <variant>

#include "triage/classification/prompt.h"
#include "triage/common/error.h"
#include "triage/common/hash.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"
#include "triage/evaluation/records.h"

namespace triage::service {

namespace {

Json TurnToJson(risk::Turn const& t) {
  Json doc = {{"speaker", t.speaker == risk::Speaker::kUser ? "user" : "system"},
              {"text", t.text},
              {"timestamp_ms", t.timestamp_ms}};
  if (!t.qtype.empty()) doc["qtype"] = t.qtype;
  if (!t.utterance_id.empty()) doc["utterance_id"] = t.utterance_id;
  return doc;
}

Json RoutingJson(taxonomy::RoutingAction const& r) {
  Json doc = {{"kind", taxonomy::RoutingKindName(r.kind)}};
  if (r.trigger) doc["trigger"] = CategoryKey(*r.trigger);
  return doc;
}

void CheckSnapshot(std::filesystem::path const& path, std::uint64_t seq,
                   std::string const& hash) {
  auto const doc = ReadJsonFile(path);
  if (doc.at("hash").get<std::string>() != hash) {
    throw Error(ErrorCode::kIo, "snapshot at seq " + std::to_string(seq) +
                                    " does not match the journal");
  }
}

}  // namespace

std::int64_t SystemNowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

ServiceState ReplayDataDir(std::filesystem::path const& data_dir,
                           taxonomy::Taxonomy const& taxonomy, JournalScan* scan) {
  auto result = ReadJournal(data_dir / kJournalFile);
  std::optional<std::uint64_t> snapshot_seq;
  auto const snapshot_path = data_dir / kSnapshotFile;
  if (std::filesystem::exists(snapshot_path)) {
    snapshot_seq = ReadJsonFile(snapshot_path).at("seq").get<std::uint64_t>();
  }
  ServiceState state(taxonomy);
  for (auto const& e : result.events) {
    state.Apply(e);
    if (snapshot_seq && *snapshot_seq == e.seq) {
      CheckSnapshot(snapshot_path, e.seq, state.Hash());
    }
  }
  if (scan != nullptr) *scan = std::move(result);
  return state;
}

Json MessageResultToJson(MessageResult const& r) {
  Json doc = {{"message_id", r.message_id}, {"status", r.classified ? "classified" : "pending"}};
  if (r.classified) {
    doc["labels"] = LabelsToJson(r.labels);
    doc["raw"] = r.raw;
  }
  if (r.routing) doc["routing"] = RoutingJson(*r.routing);
  if (!r.session_id.empty()) doc["session_id"] = r.session_id;
  if (r.prompt) doc["prompt"] = TurnToJson(*r.prompt);
  if (r.report) doc["report"] = risk::ReportToJson(*r.report);
  if (r.escalation) doc["escalation"] = risk::EscalationToJson(*r.escalation);
  if (r.delivery) doc["delivery"] = risk::DeliveryToJson(*r.delivery);
  if (r.fail_safe_action) doc["fail_safe_action"] = risk::ActionName(*r.fail_safe_action);
  if (!r.error.empty()) doc["error"] = r.error;
  return doc;
}

TriageService::TriageService(ServiceConfig config, taxonomy::Taxonomy const& taxonomy,
                             classification::ChatBackend& backend, risk::Notifier& notifier,
                             Clock clock)
    : config_(std::move(config)),
      taxonomy_(taxonomy),
      backend_(backend),
      notifier_(notifier),
      clock_(std::move(clock)),
      asset_dir_(config_.ResolvedAssetDir()),
      bank_(risk::ScreeningBank::Load(asset_dir_ / "screening_questions.json")),
      state_(taxonomy) {
  auto prompt =
      classification::PromptTemplate::Load(asset_dir_, config_.prompt_kind, config_.language);
  std::vector<classification::Exemplar> exemplars;
  if (config_.prompt_kind == classification::PromptKind::kFewShot) {
    exemplars = classification::LoadExemplars(asset_dir_ / "exemplars.json");
  }
  classifier_ = std::make_unique<classification::Classifier>(taxonomy_, std::move(prompt),
                                                             std::move(exemplars));
  classifier_config_.backend_id = backend_.id();
  classifier_config_.rounds = 1;
  if (config_.backend.kind == BackendKind::kHttp) {
    classifier_config_.model = config_.backend.http.model;
    classifier_config_.temperature = config_.backend.http.temperature;
    classifier_config_.top_p = config_.backend.http.top_p;
  }
  classifier_config_.Validate();

  risk::RiskConfig rc;
  rc.language = config_.language;
  rc.assess_max_attempts = config_.assess_max_attempts;
  rc.hotline_number = config_.hotline_number;
  rc.notify_on_aggression_against_users = config_.notify_on_aggression_against_users;
  rc.model = classifier_config_.model;
  rc.temperature = classifier_config_.temperature;
  rc.top_p = classifier_config_.top_p;
  engine_ = std::make_unique<risk::RiskEngine>(
      taxonomy_, bank_, risk::RiskTemplates::Load(asset_dir_, config_.language), rc);
}

TriageService::~TriageService() = default;

void TriageService::Open() {
  std::lock_guard lock(mu_);
  std::filesystem::create_directories(config_.data_dir);
  auto replayed = ReplayDataDir(config_.data_dir, taxonomy_);
  JournalScan scan;
  journal_ = Journal::Open(config_.data_dir / kJournalFile, &scan, config_.journal_sync);
  if (scan.events.size() != replayed.last_seq()) {
    throw Error(ErrorCode::kIo, "journal changed while opening");
  }
  state_ = std::move(replayed);
}

RecoveryReport TriageService::Recover() {
  RecoveryReport report;
  std::vector<std::string> keys;
  std::vector<std::string> sessions;
  {
    std::lock_guard lock(mu_);
    keys = state_.Undelivered();
    for (auto const& [id, s] : state_.sessions()) {
      if (s.state == risk::SessionState::kScreening || s.state == risk::SessionState::kAssessing) {
        sessions.push_back(id);
      }
    }
  }
  for (auto const& key : keys) {
    Dispatch(key);
    ++report.redispatched;
  }
  for (auto const& id : sessions) {
    auto guard = SessionLock(id);
    std::lock_guard session_lock(*guard);
    risk::RiskSession session;
    {
      std::lock_guard lock(mu_);
      session = *state_.FindSession(id);
    }
    MessageResult ignored;
    Advance(session, ignored);
    ++report.sessions_resumed;
  }
  return report;
}

Event TriageService::CommitLocked(EventKind kind, Json payload) {
  if (!journal_) throw Error(ErrorCode::kWrongState, "service is not open");
  Event e{state_.last_seq() + 1, kind, std::move(payload), clock_()};
  state_.Apply(e);
  try {
    journal_->Append(e);
  } catch (std::exception const& ex) {
    std::fprintf(stderr, "triage: fatal: %s\n", ex.what());
    std::abort();
  }
  MaybeSnapshotLocked();
  return e;
}

Event TriageService::Commit(EventKind kind, Json payload) {
  std::lock_guard lock(mu_);
  return CommitLocked(kind, std::move(payload));
}

void TriageService::MaybeSnapshotLocked() {
  if (config_.snapshot_every == 0 || state_.last_seq() % config_.snapshot_every != 0) return;
  auto doc = state_.ToJson();
  auto const hash = Sha256Hex(CanonicalDump(doc));
  Json snapshot = {{"seq", state_.last_seq()}, {"hash", hash}, {"state", std::move(doc)}};
  WriteTextFileAtomic(config_.data_dir / kSnapshotFile, CanonicalDump(snapshot));
}

void TriageService::ValidateText(std::string const& text) const {
  if (text::Trim(text).empty()) throw Error(ErrorCode::kInvalidArgument, "empty message");
  try {
    (void)Json(text).dump();
  } catch (Json::exception const&) {
    throw Error(ErrorCode::kInvalidArgument, "message is not valid UTF-8");
  }
  auto const n = text::Utf8Length(text);
  if (n > config_.max_message_chars) {
    throw Error(ErrorCode::kInvalidArgument,
                "message has " + std::to_string(n) + " characters; the limit is " +
                    std::to_string(config_.max_message_chars));
  }
}

std::string TriageService::IngestLocked(std::string const& user_id, std::string const& text,
                                        std::string const& session_id) {
  auto const id = state_.NextMessageId();
  Json payload = {{"message_id", id}, {"user_id", user_id}, {"text", text},
                  {"received_ms", clock_()}};
  if (!session_id.empty()) payload["session_id"] = session_id;
  CommitLocked(EventKind::kMessageIngested, std::move(payload));
  return id;
}

std::optional<classification::Verdict> TriageService::ClassifyOne(std::string const& text,
                                                                  std::string* error) {
  try {
    auto verdicts = classifier_->Classify(text, classifier_config_, backend_);
    return std::move(verdicts.front());
  } catch (std::exception const& e) {
    *error = e.what();
    return std::nullopt;
  }
}

risk::DeliveryRecord TriageService::Dispatch(std::string const& key) {
  Json body;
  {
    std::lock_guard lock(mu_);
    body = state_.notifications().at(key).body;
  }
  risk::DeliveryRecord delivery;
  try {
    delivery = notifier_.Notify(key, body);
  } catch (std::exception const& e) {
    delivery = {false, 1, 0, e.what()};
  }
  Commit(EventKind::kEscalationDispatched,
         {{"key", key}, {"delivery", risk::DeliveryToJson(delivery)}});
  return delivery;
}

std::shared_ptr<std::mutex> TriageService::SessionLock(std::string const& session_id) {
  std::lock_guard lock(session_locks_mu_);
  auto& slot = session_locks_[session_id];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

void TriageService::CommitSession(risk::RiskSession const& session, std::optional<Json> alert) {
  Json payload = {{"session", risk::SessionToJson(session)}};
  if (alert) payload["alert"] = std::move(*alert);
  Commit(EventKind::kSessionStateChanged, std::move(payload));
}

void TriageService::Advance(risk::RiskSession& session, MessageResult& out) {
  if (session.state == risk::SessionState::kScreening) {
    auto turn = engine_->NextPrompt(session, backend_, clock_());
    CommitSession(session);
    if (turn) {
      out.prompt = std::move(turn);
      return;
    }
  }
  if (session.state == risk::SessionState::kAssessing) {
    out.report = engine_->Assess(session, backend_);
    CommitSession(session);
  }
}

MessageResult TriageService::PostMessage(std::string const& user_id, std::string const& text) {
  ValidateText(text);
  auto const user = user_id.empty() ? std::string("anonymous") : user_id;
  MessageResult out;
  {
    std::lock_guard lock(mu_);
    out.message_id = IngestLocked(user, text, "");
  }
  auto verdict = ClassifyOne(text, &out.error);
  if (!verdict) {
    out.fail_safe_action = risk::RecommendedAction::kReferCounselor;
    return out;
  }
  out.classified = true;
  out.labels = verdict->labels;
  out.raw = verdict->raw_text;
  Json payload = {{"message_id", out.message_id},
                  {"labels", LabelsToJson(out.labels)},
                  {"raw", out.raw},
                  {"backend_id", verdict->backend_id}};
  if (!out.labels) {
    // Nothing can be routed, so the message is handed to a human.
    out.fail_safe_action = risk::RecommendedAction::kReferCounselor;
    Commit(EventKind::kVerdictRecorded, std::move(payload));
    return out;
  }

  out.routing = taxonomy_.Route(*out.labels);
  payload["routing"] = RoutingJson(*out.routing);
  if (out.routing->kind == taxonomy::RoutingKind::kMonitor) {
    Commit(EventKind::kVerdictRecorded, std::move(payload));
    return out;
  }

  out.session_id = out.routing->kind == taxonomy::RoutingKind::kAssess ? "s-" + out.message_id
                                                                       : std::string();
  auto started = engine_->Start({out.session_id, user, out.message_id, text, *out.labels},
                                clock_());
  if (auto* esc = std::get_if<risk::EscalationEvent>(&started)) {
    out.escalation = *esc;
    payload["escalation"] = risk::EscalationToJson(*esc);
    Commit(EventKind::kVerdictRecorded, std::move(payload));
    out.delivery = Dispatch(esc->idempotency_key);
    return out;
  }

  auto session = std::get<risk::RiskSession>(std::move(started));
  auto guard = SessionLock(session.session_id);
  std::lock_guard session_lock(*guard);
  Commit(EventKind::kVerdictRecorded, std::move(payload));
  std::optional<Json> alert;
  if (engine_->ShouldAlertCounselor(session)) {
    alert = Json{{"kind", "counselor_alert"},
                 {"session_id", session.session_id},
                 {"user_id", session.user_id},
                 {"utterance_id", session.trigger_utterance_id},
                 {"category", CategoryKey(session.detected_category)},
                 {"created_at_ms", session.created_at_ms}};
  }
  CommitSession(session, alert);
  if (alert) Dispatch("alert-" + session.session_id);
  Advance(session, out);
  return out;
}

MessageResult TriageService::PostReply(std::string const& session_id, std::string const& text) {
  auto guard = SessionLock(session_id);
  std::lock_guard session_lock(*guard);
  risk::RiskSession session;
  MessageResult out;
  out.session_id = session_id;
  {
    std::lock_guard lock(mu_);
    auto const* s = state_.FindSession(session_id);
    if (s == nullptr) throw Error(ErrorCode::kNotFound, "unknown session '" + session_id + "'");
    if (s->state != risk::SessionState::kAwaitingUser) {
      throw Error(ErrorCode::kWrongState, "session '" + session_id + "' is " +
                                              std::string(risk::SessionStateName(s->state)));
    }
    session = *s;
    ValidateText(text);
    out.message_id = IngestLocked(session.user_id, text, session_id);
  }
  auto verdict = ClassifyOne(text, &out.error);
  if (!verdict) {
    // The session keeps waiting; the user may resend once the backend is back.
    out.fail_safe_action = risk::RecommendedAction::kReferCounselor;
    return out;
  }
  out.classified = true;
  out.labels = verdict->labels;
  out.raw = verdict->raw_text;
  Commit(EventKind::kVerdictRecorded, {{"message_id", out.message_id},
                                       {"labels", LabelsToJson(out.labels)},
                                       {"raw", out.raw},
                                       {"backend_id", verdict->backend_id}});
  auto esc = engine_->RecordUserReply(session, out.message_id, text, out.labels, clock_());
  CommitSession(session);
  if (esc) {
    out.escalation = esc;
    out.delivery = Dispatch(esc->idempotency_key);
    return out;
  }
  Advance(session, out);
  return out;
}

risk::RiskSession TriageService::GetSession(std::string const& session_id) const {
  std::lock_guard lock(mu_);
  auto const* s = state_.FindSession(session_id);
  if (s == nullptr) throw Error(ErrorCode::kNotFound, "unknown session '" + session_id + "'");
  return *s;
}

Json TriageService::CreateBatch(Json const& body) {
  auto spec = annotation::NewBatchFromJson(body);
  if (!spec.gate_threshold && config_.gate_threshold) spec.gate_threshold = config_.gate_threshold;
  std::lock_guard lock(mu_);
  CommitLocked(EventKind::kBatchCreated, {{"batch", annotation::NewBatchToJson(spec)}});
  auto const& b = state_.workflow().batch(spec.batch_id);
  return {{"batch_id", b.batch_id},
          {"phase", annotation::PhaseName(b.phase)},
          {"size", b.size()},
          {"annotators", b.annotators},
          {"gate_threshold", b.gate_threshold},
          {"status", annotation::BatchStatusName(b.status)}};
}

Json TriageService::Page(std::string const& batch_id, std::string const& annotator,
                         std::size_t offset, std::size_t limit) const {
  std::lock_guard lock(mu_);
  auto const& b = state_.workflow().batch(batch_id);
  Json items = Json::array();
  for (auto const& item : state_.workflow().Page(batch_id, annotator, offset, limit)) {
    Json doc = {{"id", item.instance.id}, {"text", item.instance.text}};
    if (item.my_vote) doc["my_vote"] = annotation::VoteToJson(*item.my_vote);
    items.push_back(std::move(doc));
  }
  return {{"batch_id", batch_id},
          {"status", annotation::BatchStatusName(b.status)},
          {"offset", offset},
          {"total", b.size()},
          {"items", std::move(items)}};
}

Json TriageService::SubmitVotes(std::string const& batch_id, Json const& body) {
  std::vector<Json> docs;
  if (body.is_array()) {
    docs.assign(body.begin(), body.end());
  } else {
    docs.push_back(body);
  }
  if (docs.empty()) throw Error(ErrorCode::kInvalidArgument, "no votes");
  std::size_t accepted = 0;
  std::lock_guard lock(mu_);
  for (auto const& doc : docs) {
    auto vote = annotation::VoteFromJson(doc);
    if (!doc.contains("timestamp_ms")) vote.timestamp_ms = clock_();
    CommitLocked(EventKind::kVoteSubmitted,
                 {{"batch_id", batch_id}, {"vote", annotation::VoteToJson(vote)}});
    ++accepted;
  }
  return {{"batch_id", batch_id}, {"accepted", accepted}};
}

Json TriageService::CloseBatch(std::string const& batch_id) {
  std::lock_guard lock(mu_);
  // Dry run on a copy to learn the outcome; the fold recomputes it and
  // checks the journaled decision.
  auto trial = state_.workflow();
  auto const outcome = trial.CloseBatch(batch_id);
  CommitLocked(EventKind::kBatchGated,
               {{"batch_id", batch_id},
                {"decision", annotation::GateDecisionName(outcome.decision)},
                {"kappa", outcome.kappa.overall.kappa}});
  auto const& b = state_.workflow().batch(batch_id);
  Json majority = Json::array();
  for (auto const& r : outcome.majority) majority.push_back(annotation::ResolutionToJson(r));
  Json discussions = Json::array();
  for (auto const& d : outcome.discussions) {
    discussions.push_back({{"instance_id", d.instance_id},
                           {"reason", annotation::DiscussionReasonName(d.reason)}});
  }
  return {{"batch_id", batch_id},
          {"decision", annotation::GateDecisionName(outcome.decision)},
          {"threshold", b.gate_threshold},
          {"kappa", annotation::BatchKappaToJson(outcome.kappa)},
          {"status", annotation::BatchStatusName(b.status)},
          {"rejections", b.rejections},
          {"majority", std::move(majority)},
          {"discussions", std::move(discussions)}};
}

Json TriageService::BatchKappa(std::string const& batch_id) const {
  std::lock_guard lock(mu_);
  auto const& wf = state_.workflow();
  auto const& b = wf.batch(batch_id);
  std::vector<std::string> ids;
  std::vector<annotation::Vote> votes;
  for (auto const& inst : b.instances) {
    auto v = wf.VotesFor(inst.id);
    if (v.size() != annotation::kAnnotatorsPerInstance) {
      throw Error(ErrorCode::kUnevenRaters, "instance '" + inst.id + "' has " +
                                                std::to_string(v.size()) + " of 3 votes");
    }
    ids.push_back(inst.id);
    votes.insert(votes.end(), v.begin(), v.end());
  }
  auto const kappa = annotation::ComputeBatchKappa(ids, votes, taxonomy_);
  Json doc = {{"batch_id", batch_id},
              {"threshold", b.gate_threshold},
              {"would_pass", annotation::QualityGate(kappa.overall.kappa, b.gate_threshold) ==
                                 annotation::GateDecision::kAccepted},
              {"kappa", annotation::BatchKappaToJson(kappa)},
              {"status", annotation::BatchStatusName(b.status)}};
  if (b.last_gate) doc["last_gate"] = annotation::GateDecisionName(*b.last_gate);
  return doc;
}

Json TriageService::Discussions() const {
  std::lock_guard lock(mu_);
  Json items = Json::array();
  for (auto const& d : state_.workflow().Discussions()) {
    Json votes = Json::array();
    for (auto const& v : d.votes) votes.push_back(annotation::VoteToJson(v));
    items.push_back({{"batch_id", d.batch_id},
                     {"instance_id", d.discussion.instance_id},
                     {"reason", annotation::DiscussionReasonName(d.discussion.reason)},
                     {"votes", std::move(votes)}});
  }
  return {{"discussions", std::move(items)}};
}

Json TriageService::SubmitResolution(std::string const& instance_id, Json const& body) {
  RejectUnknownKeys(body, {"final_labels", "acknowledged_by"}, "resolution");
  std::vector<std::string> labels;
  std::vector<std::string> acks;
  try {
    labels = RequireMember(body, "final_labels").get<std::vector<std::string>>();
    acks = RequireMember(body, "acknowledged_by").get<std::vector<std::string>>();
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("resolution: ") + e.what());
  }
  (void)LabelSet::FromKeys(labels);
  std::lock_guard lock(mu_);
  CommitLocked(EventKind::kResolutionRecorded,
               {{"instance_id", instance_id}, {"final_labels", labels}, {"acknowledged_by", acks}});
  return annotation::ResolutionToJson(*state_.workflow().ResolutionFor(instance_id));
}

std::string TriageService::ExportJsonl() const {
  std::lock_guard lock(mu_);
  return evaluation::SerializeDataset(state_.workflow().Export());
}

Json TriageService::Snapshot() const {
  std::lock_guard lock(mu_);
  auto doc = state_.ToJson();
  auto const hash = Sha256Hex(CanonicalDump(doc));
  return {{"seq", state_.last_seq()}, {"hash", hash}, {"state", std::move(doc)}};
}

Json TriageService::Health() const {
  std::lock_guard lock(mu_);
  std::size_t pending = 0;
  for (auto const& id : state_.message_order()) {
    if (!state_.FindMessage(id)->classified) ++pending;
  }
  return {{"status", "ok"},
          {"last_seq", state_.last_seq()},
          {"backend", backend_.id()},
          {"pending_messages", pending},
          {"undelivered_notifications", state_.Undelivered().size()}};
}

std::uint64_t TriageService::last_seq() const {
  std::lock_guard lock(mu_);
  return state_.last_seq();
}

std::string TriageService::StateHash() const {
  std::lock_guard lock(mu_);
  return state_.Hash();
}

}  // namespace triage::service
