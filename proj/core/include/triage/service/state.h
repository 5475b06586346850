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

#ifndef TRIAGE_SERVICE_STATE_H_
#define TRIAGE_SERVICE_STATE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/annotation/workflow.h"
#include "triage/risk/notifier.h"
#include "triage/risk/session.h"
#include "triage/service/event.h"
#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::service {

/// Category keys, or "UNPARSEABLE".
nlohmann::json LabelsToJson(Prediction const& labels);
Prediction LabelsFromJson(nlohmann::json const& doc);

struct MessageRecord {
  std::string message_id;
  std::string user_id;
  std::string text;
  /// Set when the message is a reply inside a screening session.
  std::string session_id;
  std::int64_t received_ms = 0;
  /// False until a verdict is journaled; stays false when the backend was
  /// unavailable.
  bool classified = false;
  Prediction verdict;
  std::string raw;
  std::string backend_id;
  std::optional<taxonomy::RoutingAction> routing;
};

enum class NotificationKind { kEscalation, kCounselorAlert };

/// One owed counselor notification, keyed by its idempotency key.
struct Notification {
  std::string key;
  NotificationKind kind = NotificationKind::kEscalation;
  nlohmann::json body;
  bool delivered = false;
  int dispatches = 0;
  std::optional<risk::DeliveryRecord> last_delivery;
};

/// Everything the service knows, rebuilt by folding journal events in order.
/// Apply never calls a backend or reads a clock, so replay is deterministic.
class ServiceState {
 public:
  explicit ServiceState(taxonomy::Taxonomy const& taxonomy)
      : taxonomy_(&taxonomy), workflow_(taxonomy) {}

  /// Applies one event. Throws Error(kParse) for a sequence gap or malformed
  /// payload and passes through workflow errors. On a throw the state is
  /// unchanged.
  void Apply(Event const& event);

  std::uint64_t last_seq() const { return last_seq_; }

  MessageRecord const* FindMessage(std::string const& id) const;
  risk::RiskSession const* FindSession(std::string const& id) const;
  std::vector<std::string> const& message_order() const { return message_order_; }
  std::map<std::string, risk::RiskSession> const& sessions() const { return sessions_; }
  std::map<std::string, Notification> const& notifications() const { return notifications_; }
  annotation::Workflow const& workflow() const { return workflow_; }

  /// Keys of notifications not yet delivered, in key order.
  std::vector<std::string> Undelivered() const;

  /// Id for the next ingested message: "m" + zero-padded ordinal.
  std::string NextMessageId() const;

  nlohmann::json ToJson() const;
  /// SHA-256 of the canonical ToJson() dump.
  std::string Hash() const;

 private:
  void ApplyMessageIngested(nlohmann::json const& p);
  void ApplyVerdictRecorded(nlohmann::json const& p);
  void ApplySessionStateChanged(nlohmann::json const& p);
  void ApplyEscalationDispatched(nlohmann::json const& p);
  void Owe(std::string const& key, NotificationKind kind, nlohmann::json body);

  taxonomy::Taxonomy const* taxonomy_;
  std::uint64_t last_seq_ = 0;
  std::map<std::string, MessageRecord> messages_;
  std::vector<std::string> message_order_;
  std::map<std::string, risk::RiskSession> sessions_;
  std::map<std::string, Notification> notifications_;
  annotation::Workflow workflow_;
};

}  // namespace triage::service

#endif  // TRIAGE_SERVICE_STATE_H_
