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

#ifndef TRIAGE_SERVICE_SERVICE_H_
#define TRIAGE_SERVICE_SERVICE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/classification/backend.h"
#include "triage/classification/classifier.h"
#include "triage/risk/notifier.h"
#include "triage/risk/screening.h"
#include "triage/risk/session.h"
#include "triage/service/config.h"
#include "triage/service/journal.h"
#include "triage/service/state.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::service {

/// Milliseconds since the epoch.
using Clock = std::function<std::int64_t()>;
std::int64_t SystemNowMs();

inline constexpr char kJournalFile[] = "journal.log";
inline constexpr char kSnapshotFile[] = "snapshot.json";

/// Folds the journal in `data_dir`. When a snapshot exists its hash is
/// checked against the fold at the snapshot's sequence number; a mismatch
/// throws Error(kIo).
ServiceState ReplayDataDir(std::filesystem::path const& data_dir,
                           taxonomy::Taxonomy const& taxonomy, JournalScan* scan = nullptr);

struct MessageResult {
  std::string message_id;
  /// False when the backend could not be reached; the message is journaled
  /// and `fail_safe_action` tells the caller what to do meanwhile.
  bool classified = false;
  Prediction labels;
  std::string raw;
  std::optional<taxonomy::RoutingAction> routing;
  std::string session_id;
  std::optional<risk::Turn> prompt;
  std::optional<risk::AssessmentReport> report;
  std::optional<risk::EscalationEvent> escalation;
  std::optional<risk::DeliveryRecord> delivery;
  std::optional<risk::RecommendedAction> fail_safe_action;
  std::string error;
};

nlohmann::json MessageResultToJson(MessageResult const& result);

struct RecoveryReport {
  std::size_t redispatched = 0;
  std::size_t sessions_resumed = 0;
};

/// Message triage, screening sessions and the annotation workflow on top of
/// an append-only journal. Every state change is applied to the in-memory
/// state and journaled under one mutex; backend and webhook calls run outside
/// it, serialized per screening session.
class TriageService {
 public:
  /// `taxonomy`, `backend` and `notifier` must outlive the service.
  TriageService(ServiceConfig config, taxonomy::Taxonomy const& taxonomy,
                classification::ChatBackend& backend, risk::Notifier& notifier,
                Clock clock = SystemNowMs);
  ~TriageService();

  /// Replays the data directory and opens the journal for appending.
  void Open();
  /// Redelivers undelivered notifications with their original keys, and
  /// moves sessions left mid-step by a crash to their next user-facing state.
  RecoveryReport Recover();

  /// Classifies one user message and routes it. Throws
  /// Error(kInvalidArgument) for empty, oversize or malformed text.
  MessageResult PostMessage(std::string const& user_id, std::string const& text);
  /// A user's answer inside a screening session. Throws kNotFound for an
  /// unknown session and kWrongState unless it is awaiting the user.
  MessageResult PostReply(std::string const& session_id, std::string const& text);
  risk::RiskSession GetSession(std::string const& session_id) const;

  nlohmann::json CreateBatch(nlohmann::json const& body);
  nlohmann::json Page(std::string const& batch_id, std::string const& annotator,
                      std::size_t offset, std::size_t limit) const;
  /// Accepts one vote object or an array; `timestamp_ms` defaults to now.
  /// Votes are validated and journaled one by one.
  nlohmann::json SubmitVotes(std::string const& batch_id, nlohmann::json const& body);
  nlohmann::json CloseBatch(std::string const& batch_id);
  /// Kappa of the current votes without gating. Throws kUnevenRaters while
  /// votes are missing.
  nlohmann::json BatchKappa(std::string const& batch_id) const;
  nlohmann::json Discussions() const;
  nlohmann::json SubmitResolution(std::string const& instance_id, nlohmann::json const& body);
  /// Adjudicated dataset as JSON Lines.
  std::string ExportJsonl() const;

  nlohmann::json Snapshot() const;
  nlohmann::json Health() const;
  std::uint64_t last_seq() const;
  std::string StateHash() const;

  ServiceConfig const& config() const { return config_; }

 private:
  // Applies then journals one event under mu_. A journal write failure
  // aborts the process: the event was applied but never acknowledged, and a
  // restart rebuilds the state from what was written.
  Event CommitLocked(EventKind kind, nlohmann::json payload);
  Event Commit(EventKind kind, nlohmann::json payload);
  void MaybeSnapshotLocked();

  std::string IngestLocked(std::string const& user_id, std::string const& text,
                           std::string const& session_id);
  void ValidateText(std::string const& text) const;
  /// nullopt when classification failed.
  std::optional<classification::Verdict> ClassifyOne(std::string const& text,
                                                     std::string* error);
  risk::DeliveryRecord Dispatch(std::string const& key);
  /// Runs NextPrompt, and Assess once the questions run out, committing each
  /// step. The caller holds the session lock.
  void Advance(risk::RiskSession& session, MessageResult& out);
  void CommitSession(risk::RiskSession const& session,
                     std::optional<nlohmann::json> alert = std::nullopt);
  std::shared_ptr<std::mutex> SessionLock(std::string const& session_id);

  ServiceConfig config_;
  taxonomy::Taxonomy const& taxonomy_;
  classification::ChatBackend& backend_;
  risk::Notifier& notifier_;
  Clock clock_;
  std::filesystem::path asset_dir_;

  std::unique_ptr<classification::Classifier> classifier_;
  classification::ClassifierConfig classifier_config_;
  risk::ScreeningBank bank_;
  std::unique_ptr<risk::RiskEngine> engine_;

  mutable std::mutex mu_;
  ServiceState state_;
  std::unique_ptr<Journal> journal_;

  std::mutex session_locks_mu_;
  std::map<std::string, std::shared_ptr<std::mutex>> session_locks_;
};

}  // namespace triage::service

#endif  // TRIAGE_SERVICE_SERVICE_H_
