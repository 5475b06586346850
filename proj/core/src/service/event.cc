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

#include "triage/service/event.h"

#include <array>
#include <utility>

#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::service {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kNames = {{
    {EventKind::kMessageIngested, "MessageIngested"},
    {EventKind::kVerdictRecorded, "VerdictRecorded"},
    {EventKind::kSessionStateChanged, "SessionStateChanged"},
    {EventKind::kEscalationDispatched, "EscalationDispatched"},
    {EventKind::kVoteSubmitted, "VoteSubmitted"},
    {EventKind::kBatchGated, "BatchGated"},
    {EventKind::kResolutionRecorded, "ResolutionRecorded"},
    {EventKind::kBatchCreated, "BatchCreated"},
}};

}  // namespace

std::string_view EventKindName(EventKind kind) {
  for (auto const& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "";
}

std::optional<EventKind> EventKindFromName(std::string_view name) {
  for (auto const& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Json EventToJson(Event const& event) {
  return {{"seq", event.seq},
          {"kind", EventKindName(event.kind)},
          {"payload", event.payload},
          {"timestamp_ms", event.timestamp_ms}};
}

Event EventFromJson(Json const& doc) {
  Event e;
  try {
    e.seq = doc.at("seq").get<std::uint64_t>();
    auto const name = doc.at("kind").get<std::string>();
    auto kind = EventKindFromName(name);
    if (!kind) throw Error(ErrorCode::kParse, "unknown event kind '" + name + "'");
    e.kind = *kind;
    e.payload = doc.at("payload");
    e.timestamp_ms = doc.at("timestamp_ms").get<std::int64_t>();
  } catch (Json::exception const& ex) {
    throw Error(ErrorCode::kParse, std::string("event: ") + ex.what());
  }
  return e;
}

}  // namespace triage::service
