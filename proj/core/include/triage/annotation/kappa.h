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

#ifndef TRIAGE_ANNOTATION_KAPPA_H_
#define TRIAGE_ANNOTATION_KAPPA_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::annotation {

/// One annotator's labels for one instance.
struct Vote {
  std::string annotator_id;
  std::string instance_id;
  LabelSet labels = LabelSet::Of({CategoryId::kIrrelevant});
  std::int64_t timestamp_ms = 0;

  bool multi_label_flag() const { return labels.IsMultiLabel(); }
};

nlohmann::json VoteToJson(Vote const& vote);
Vote VoteFromJson(nlohmann::json const& doc);

struct KappaReport {
  double kappa = 0;
  double observed_agreement = 0;  // P-bar
  double expected_agreement = 0;  // P-bar-e
  std::size_t n_items = 0;
  std::size_t n_raters = 0;
  /// Pooled proportion of votes per category column; sums to 1.
  std::vector<double> category_marginals;
};

nlohmann::json KappaReportToJson(KappaReport const& report);
KappaReport KappaReportFromJson(nlohmann::json const& doc);

/// Fleiss' kappa of an items x categories count table in which every row sums
/// to the same number of raters n >= 2.
///
/// Throws kUnevenRaters on unequal or too small row sums (or an empty table)
/// and kDegenerateMarginals when every vote falls in one category but items
/// disagree. A single-category table with full agreement yields kappa = 1.
///
/// All sums are accumulated in integers and divided once at the end.
KappaReport FleissKappa(std::span<std::vector<std::int64_t> const> table);

/// Kappa for a batch. Each vote is reduced to its riskiest category to build
/// the 11-column table; a binary (contains / lacks) kappa per category is
/// reported alongside for categories that receive at least one vote.
struct BatchKappa {
  KappaReport overall;
  std::array<std::optional<KappaReport>, kCategoryCount> per_category;
};

/// `votes` is grouped by the order of `instance_ids`; each instance must have
/// the same number of votes (kUnevenRaters otherwise).
BatchKappa ComputeBatchKappa(std::span<std::string const> instance_ids,
                             std::span<Vote const> votes,
                             taxonomy::Taxonomy const& taxonomy);

nlohmann::json BatchKappaToJson(BatchKappa const& kappa);

enum class GateDecision { kAccepted, kRejected };

std::string_view GateDecisionName(GateDecision decision);

inline constexpr double kDefaultGateThreshold = 0.6;

/// Rejected iff kappa < threshold.
GateDecision QualityGate(double kappa, double threshold = kDefaultGateThreshold);

}  // namespace triage::annotation

#endif  // TRIAGE_ANNOTATION_KAPPA_H_
