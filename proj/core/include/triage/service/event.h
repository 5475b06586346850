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

#ifndef TRIAGE_SERVICE_EVENT_H_
#define TRIAGE_SERVICE_EVENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace triage::service {

enum class EventKind {
  kMessageIngested,
  kVerdictRecorded,
  kSessionStateChanged,
  kEscalationDispatched,
  kVoteSubmitted,
  kBatchGated,
  kResolutionRecorded,
  kBatchCreated,
};

std::string_view EventKindName(EventKind kind);
std::optional<EventKind> EventKindFromName(std::string_view name);

struct Event {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kMessageIngested;
  nlohmann::json payload;
  std::int64_t timestamp_ms = 0;
};

nlohmann::json EventToJson(Event const& event);
Event EventFromJson(nlohmann::json const& doc);

}  // namespace triage::service

#endif  // TRIAGE_SERVICE_EVENT_H_
