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

#ifndef TRIAGE_ANNOTATION_ADJUDICATION_H_
#define TRIAGE_ANNOTATION_ADJUDICATION_H_

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/annotation/kappa.h"
#include "triage/taxonomy/label_set.h"

namespace triage::annotation {

inline constexpr std::size_t kAnnotatorsPerInstance = 3;

enum class ResolutionMethod { kMajority, kDiscussion };

std::string_view ResolutionMethodName(ResolutionMethod method);

struct Resolution {
  std::string instance_id;
  ResolutionMethod method = ResolutionMethod::kMajority;
  LabelSet final_labels = LabelSet::Of({CategoryId::kIrrelevant});
  /// Majority: the annotators whose votes formed the majority. Discussion:
  /// every annotator who acknowledged the outcome.
  std::vector<std::string> participants;
};

nlohmann::json ResolutionToJson(Resolution const& r);
Resolution ResolutionFromJson(nlohmann::json const& doc);

enum class DiscussionReason { kAllDistinct, kMultiLabel };

std::string_view DiscussionReasonName(DiscussionReason reason);

struct DiscussionRequired {
  std::string instance_id;
  DiscussionReason reason = DiscussionReason::kAllDistinct;
};

/// Majority when at least two of the three votes carry identical label sets;
/// otherwise, or whenever any vote is multi-label, the instance goes to
/// discussion. Throws kWrongVoteCount unless exactly three votes from three
/// distinct annotators for one instance are given.
std::variant<Resolution, DiscussionRequired> Adjudicate(std::span<Vote const> votes);

/// Builds a Discussion resolution. Every id in `annotators` must appear in
/// `acknowledged_by`; anything else is kInvalidArgument.
Resolution ResolveByDiscussion(std::string instance_id, LabelSet final_labels,
                               std::span<std::string const> annotators,
                               std::span<std::string const> acknowledged_by);

}  // namespace triage::annotation

#endif  // TRIAGE_ANNOTATION_ADJUDICATION_H_
