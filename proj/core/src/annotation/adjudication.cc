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

#include "triage/annotation/adjudication.h"

#include <algorithm>
#include <set>

#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::annotation {

std::string_view ResolutionMethodName(ResolutionMethod method) {
  return method == ResolutionMethod::kMajority ? "majority" : "discussion";
}

std::string_view DiscussionReasonName(DiscussionReason reason) {
  return reason == DiscussionReason::kAllDistinct ? "all_distinct" : "multi_label";
}

Json ResolutionToJson(Resolution const& r) {
  return {{"instance_id", r.instance_id},
          {"method", ResolutionMethodName(r.method)},
          {"final_labels", r.final_labels.Keys()},
          {"participants", r.participants}};
}

Resolution ResolutionFromJson(Json const& doc) {
  Resolution r;
  try {
    r.instance_id = doc.at("instance_id").get<std::string>();
    auto const method = doc.at("method").get<std::string>();
    if (method == "majority") {
      r.method = ResolutionMethod::kMajority;
    } else if (method == "discussion") {
      r.method = ResolutionMethod::kDiscussion;
    } else {
      throw Error(ErrorCode::kParse, "unknown resolution method '" + method + "'");
    }
    r.final_labels = LabelSet::FromKeys(doc.at("final_labels").get<std::vector<std::string>>());
    r.participants = doc.at("participants").get<std::vector<std::string>>();
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kParse, std::string("resolution: ") + e.what());
  }
  return r;
}

std::variant<Resolution, DiscussionRequired> Adjudicate(std::span<Vote const> votes) {
  if (votes.size() != kAnnotatorsPerInstance) {
    throw Error(ErrorCode::kWrongVoteCount,
                "adjudication needs exactly 3 votes, got " + std::to_string(votes.size()));
  }
  std::set<std::string> annotators;
  for (auto const& v : votes) {
    if (v.instance_id != votes[0].instance_id) {
      throw Error(ErrorCode::kWrongVoteCount, "votes belong to different instances");
    }
    annotators.insert(v.annotator_id);
  }
  if (annotators.size() != kAnnotatorsPerInstance) {
    throw Error(ErrorCode::kWrongVoteCount, "votes must come from three distinct annotators");
  }
  auto const& id = votes[0].instance_id;
  if (std::any_of(votes.begin(), votes.end(),
                  [](Vote const& v) { return v.multi_label_flag(); })) {
    return DiscussionRequired{id, DiscussionReason::kMultiLabel};
  }
  for (std::size_t i = 0; i < votes.size(); ++i) {
    Resolution r{id, ResolutionMethod::kMajority, votes[i].labels, {}};
    for (auto const& v : votes) {
      if (v.labels == votes[i].labels) r.participants.push_back(v.annotator_id);
    }
    if (r.participants.size() >= 2) {
      std::sort(r.participants.begin(), r.participants.end());
      return r;
    }
  }
  return DiscussionRequired{id, DiscussionReason::kAllDistinct};
}

Resolution ResolveByDiscussion(std::string instance_id, LabelSet final_labels,
                               std::span<std::string const> annotators,
                               std::span<std::string const> acknowledged_by) {
  std::set<std::string> acks(acknowledged_by.begin(), acknowledged_by.end());
  for (auto const& a : annotators) {
    if (!acks.contains(a)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "discussion resolution for '" + instance_id +
                      "' lacks an acknowledgment from '" + a + "'");
    }
  }
  for (auto const& a : acks) {
    if (std::find(annotators.begin(), annotators.end(), a) == annotators.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + a + "' is not an annotator of '" + instance_id + "'");
    }
  }
  return Resolution{std::move(instance_id), ResolutionMethod::kDiscussion, final_labels,
                    {acks.begin(), acks.end()}};
}

}  // namespace triage::annotation
