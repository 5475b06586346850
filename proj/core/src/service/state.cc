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

#include "triage/service/state.h"

#include <cstdio>

#include "triage/common/error.h"
#include "triage/common/hash.h"
#include "triage/common/json_io.h"

namespace triage::service {

namespace {

Error Malformed(std::string const& what) { return Error(ErrorCode::kParse, what); }

Json RoutingToJson(taxonomy::RoutingAction const& r) {
  Json doc = {{"kind", taxonomy::RoutingKindName(r.kind)}};
  if (r.trigger) doc["trigger"] = CategoryKey(*r.trigger);
  return doc;
}

taxonomy::RoutingAction RoutingFromJson(Json const& doc) {
  auto const name = doc.at("kind").get<std::string>();
  std::optional<taxonomy::RoutingKind> kind;
  for (auto k : {taxonomy::RoutingKind::kEscalate, taxonomy::RoutingKind::kAssess,
                 taxonomy::RoutingKind::kMonitor}) {
    if (taxonomy::RoutingKindName(k) == name) kind = k;
  }
  if (!kind) throw Malformed("unknown routing kind '" + name + "'");
  taxonomy::RoutingAction r{*kind, std::nullopt};
  if (doc.contains("trigger")) {
    auto const key = doc["trigger"].get<std::string>();
    r.trigger = CategoryFromKey(key);
    if (!r.trigger) throw Malformed("unknown category '" + key + "'");
  }
  return r;
}

std::string_view NotificationKindName(NotificationKind kind) {
  return kind == NotificationKind::kEscalation ? "escalation" : "counselor_alert";
}

}  // namespace

Json LabelsToJson(Prediction const& labels) {
  if (!labels) return "UNPARSEABLE";
  return labels->Keys();
}

Prediction LabelsFromJson(Json const& doc) {
  if (doc.is_string() && doc.get<std::string>() == "UNPARSEABLE") return std::nullopt;
  return LabelSet::FromKeys(doc.get<std::vector<std::string>>());
}

void ServiceState::Apply(Event const& event) {
  if (event.seq != last_seq_ + 1) {
    throw Malformed("event seq " + std::to_string(event.seq) + " does not follow " +
                    std::to_string(last_seq_));
  }
  auto const& p = event.payload;
  try {
    switch (event.kind) {
      case EventKind::kMessageIngested:
        ApplyMessageIngested(p);
        break;
      case EventKind::kVerdictRecorded:
        ApplyVerdictRecorded(p);
        break;
      case EventKind::kSessionStateChanged:
        ApplySessionStateChanged(p);
        break;
      case EventKind::kEscalationDispatched:
        ApplyEscalationDispatched(p);
        break;
      case EventKind::kBatchCreated:
        workflow_.CreateBatch(annotation::NewBatchFromJson(p.at("batch")));
        break;
      case EventKind::kVoteSubmitted:
        workflow_.SubmitVote(p.at("batch_id").get<std::string>(),
                             annotation::VoteFromJson(p.at("vote")));
        break;
      case EventKind::kBatchGated: {
        auto const outcome = workflow_.CloseBatch(p.at("batch_id").get<std::string>());
        // The gate is recomputed from the folded votes; a mismatch means the
        // journal and the code disagree.
        if (p.contains("decision") &&
            p["decision"].get<std::string>() != annotation::GateDecisionName(outcome.decision)) {
          throw Malformed("gate decision differs from the journaled one");
        }
        break;
      }
      case EventKind::kResolutionRecorded:
        workflow_.SubmitResolution(
            p.at("instance_id").get<std::string>(),
            LabelSet::FromKeys(p.at("final_labels").get<std::vector<std::string>>()),
            p.at("acknowledged_by").get<std::vector<std::string>>());
        break;
    }
  } catch (Json::exception const& e) {
    throw Malformed(std::string(EventKindName(event.kind)) + ": " + e.what());
  }
  last_seq_ = event.seq;
}

void ServiceState::ApplyMessageIngested(Json const& p) {
  MessageRecord m;
  m.message_id = p.at("message_id").get<std::string>();
  m.user_id = p.at("user_id").get<std::string>();
  m.text = p.at("text").get<std::string>();
  m.session_id = p.value("session_id", std::string());
  m.received_ms = p.at("received_ms").get<std::int64_t>();
  if (messages_.contains(m.message_id)) throw Malformed("duplicate message " + m.message_id);
  message_order_.push_back(m.message_id);
  messages_.emplace(m.message_id, std::move(m));
}

void ServiceState::ApplyVerdictRecorded(Json const& p) {
  auto const id = p.at("message_id").get<std::string>();
  auto it = messages_.find(id);
  if (it == messages_.end()) throw Malformed("verdict for unknown message " + id);
  auto verdict = LabelsFromJson(p.at("labels"));
  std::optional<taxonomy::RoutingAction> routing;
  if (p.contains("routing")) routing = RoutingFromJson(p["routing"]);
  std::optional<risk::EscalationEvent> escalation;
  if (p.contains("escalation")) escalation = risk::EscalationFromJson(p["escalation"]);

  auto& m = it->second;
  m.classified = true;
  m.verdict = verdict;
  m.raw = p.value("raw", std::string());
  m.backend_id = p.value("backend_id", std::string());
  m.routing = routing;
  if (escalation) {
    Owe(escalation->idempotency_key, NotificationKind::kEscalation,
        risk::CounselorNotificationBody(*escalation));
  }
}

void ServiceState::ApplySessionStateChanged(Json const& p) {
  auto session = risk::SessionFromJson(p.at("session"));
  if (session.session_id.empty()) throw Malformed("session without id");
  std::optional<Json> alert;
  if (p.contains("alert")) alert = p["alert"];
  if (alert) Owe("alert-" + session.session_id, NotificationKind::kCounselorAlert, *alert);
  if (session.escalation) {
    Owe(session.escalation->idempotency_key, NotificationKind::kEscalation,
        risk::CounselorNotificationBody(*session.escalation));
  }
  sessions_.insert_or_assign(session.session_id, std::move(session));
}

void ServiceState::ApplyEscalationDispatched(Json const& p) {
  auto const key = p.at("key").get<std::string>();
  auto const delivery = risk::DeliveryFromJson(p.at("delivery"));
  auto it = notifications_.find(key);
  if (it == notifications_.end()) throw Malformed("dispatch of unknown notification " + key);
  auto& n = it->second;
  ++n.dispatches;
  n.last_delivery = delivery;
  n.delivered = n.delivered || delivery.delivered;
}

void ServiceState::Owe(std::string const& key, NotificationKind kind, Json body) {
  // Re-journaling the same escalation (e.g. in later session snapshots)
  // keeps the existing entry and its delivery history.
  if (notifications_.contains(key)) return;
  Notification n;
  n.key = key;
  n.kind = kind;
  n.body = std::move(body);
  notifications_.emplace(key, std::move(n));
}

MessageRecord const* ServiceState::FindMessage(std::string const& id) const {
  auto it = messages_.find(id);
  return it == messages_.end() ? nullptr : &it->second;
}

risk::RiskSession const* ServiceState::FindSession(std::string const& id) const {
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::vector<std::string> ServiceState::Undelivered() const {
  std::vector<std::string> out;
  for (auto const& [key, n] : notifications_) {
    if (!n.delivered) out.push_back(key);
  }
  return out;
}

std::string ServiceState::NextMessageId() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m%06zu", messages_.size() + 1);
  return buf;
}

Json ServiceState::ToJson() const {
  Json messages = Json::array();
  for (auto const& id : message_order_) {
    auto const& m = messages_.at(id);
    Json doc = {{"message_id", m.message_id},
                {"user_id", m.user_id},
                {"text", m.text},
                {"received_ms", m.received_ms},
                {"classified", m.classified}};
    if (!m.session_id.empty()) doc["session_id"] = m.session_id;
    if (m.classified) {
      doc["labels"] = LabelsToJson(m.verdict);
      doc["raw"] = m.raw;
      doc["backend_id"] = m.backend_id;
    }
    if (m.routing) doc["routing"] = RoutingToJson(*m.routing);
    messages.push_back(std::move(doc));
  }
  Json sessions = Json::object();
  for (auto const& [id, s] : sessions_) sessions[id] = risk::SessionToJson(s);
  Json notifications = Json::object();
  for (auto const& [key, n] : notifications_) {
    Json doc = {{"kind", NotificationKindName(n.kind)},
                {"body", n.body},
                {"delivered", n.delivered},
                {"dispatches", n.dispatches}};
    if (n.last_delivery) doc["last_delivery"] = risk::DeliveryToJson(*n.last_delivery);
    notifications[key] = std::move(doc);
  }
  return {{"last_seq", last_seq_},
          {"messages", std::move(messages)},
          {"sessions", std::move(sessions)},
          {"notifications", std::move(notifications)},
          {"annotation", workflow_.ToJson()}};
}

std::string ServiceState::Hash() const { return Sha256Hex(CanonicalDump(ToJson())); }

}  // namespace triage::service
