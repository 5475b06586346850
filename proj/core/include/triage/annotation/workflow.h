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

#ifndef TRIAGE_ANNOTATION_WORKFLOW_H_
#define TRIAGE_ANNOTATION_WORKFLOW_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/annotation/adjudication.h"
#include "triage/annotation/kappa.h"
#include "triage/evaluation/records.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::annotation {

enum class Phase { kTrial, kMiniBatch, kLargeScale };

std::string_view PhaseName(Phase phase);
std::optional<Phase> PhaseFromName(std::string_view name);

/// Batch sizes and gate threshold of an annotation phase.
struct PhasePreset {
  Phase phase;
  std::vector<std::size_t> batch_sizes;
  double gate_threshold;
};

/// trial: 200/300/300 at 0.5; mini_batch: 5 x 100 and large_scale: 27 x 500,
/// both at 0.6.
PhasePreset const& PresetFor(Phase phase);

enum class BatchStatus { kOpen, kAwaitingAdjudication, kAccepted };

std::string_view BatchStatusName(BatchStatus status);

struct BatchInstance {
  std::string id;
  std::string text;
  evaluation::Source source = evaluation::Source::kPlatform;
};

struct Batch {
  std::string batch_id;
  Phase phase = Phase::kLargeScale;
  std::vector<BatchInstance> instances;
  std::vector<std::string> annotators;
  double gate_threshold = kDefaultGateThreshold;
  BatchStatus status = BatchStatus::kOpen;
  std::optional<BatchKappa> kappa;
  std::optional<GateDecision> last_gate;
  int rejections = 0;

  std::size_t size() const { return instances.size(); }
};

struct NewBatch {
  std::string batch_id;
  Phase phase = Phase::kLargeScale;
  std::vector<BatchInstance> instances;
  std::vector<std::string> annotators;
  /// Defaults to the phase preset.
  std::optional<double> gate_threshold;
};

nlohmann::json NewBatchToJson(NewBatch const& batch);
NewBatch NewBatchFromJson(nlohmann::json const& doc);

struct GateOutcome {
  GateDecision decision;
  BatchKappa kappa;
  std::vector<Resolution> majority;
  std::vector<DiscussionRequired> discussions;
};

struct PageItem {
  BatchInstance instance;
  std::optional<Vote> my_vote;
};

struct DiscussionItem {
  std::string batch_id;
  DiscussionRequired discussion;
  std::vector<Vote> votes;
};

/// Batches, votes, gating and adjudication. Not internally synchronized: the
/// owner serializes calls (the service does so through its journal lock).
/// Every mutator is deterministic in its arguments, so replaying the same
/// calls rebuilds the same state.
class Workflow {
 public:
  explicit Workflow(taxonomy::Taxonomy const& taxonomy) : taxonomy_(&taxonomy) {}

  /// Requires a fresh batch id, three distinct annotators and instances that
  /// are not part of any other batch.
  Batch const& CreateBatch(NewBatch spec);

  /// The batch must be Open, the instance in it and the annotator assigned to
  /// it. A second vote from the same annotator replaces the first.
  void SubmitVote(std::string const& batch_id, Vote vote);

  /// Computes kappa and applies the gate. Rejected: the batch stays Open with
  /// every vote kept for revision. Accepted: every instance is adjudicated;
  /// the batch is Accepted once no discussion remains.
  GateOutcome CloseBatch(std::string const& batch_id);

  /// Settles a queued discussion; all three annotators must acknowledge.
  Resolution SubmitResolution(std::string const& instance_id, LabelSet final_labels,
                              std::vector<std::string> const& acknowledged_by);

  Batch const& batch(std::string const& batch_id) const;
  std::vector<std::string> BatchIds() const { return order_; }
  std::vector<PageItem> Page(std::string const& batch_id, std::string const& annotator,
                             std::size_t offset, std::size_t limit) const;
  std::vector<Vote> VotesFor(std::string const& instance_id) const;
  std::vector<DiscussionItem> Discussions() const;
  std::optional<Resolution> ResolutionFor(std::string const& instance_id) const;

  /// Adjudicated instances of Accepted batches in creation order, as
  /// dataset records.
  std::vector<evaluation::UtteranceRecord> Export() const;

  nlohmann::json ToJson() const;

 private:
  Batch& MutableBatch(std::string const& batch_id);

  taxonomy::Taxonomy const* taxonomy_;
  std::map<std::string, Batch> batches_;
  std::vector<std::string> order_;
  std::map<std::string, std::string> batch_of_instance_;
  std::map<std::string, std::map<std::string, Vote>> votes_;
  std::map<std::string, Resolution> resolutions_;
  std::map<std::string, DiscussionRequired> pending_;
};

}  // namespace triage::annotation

#endif  // TRIAGE_ANNOTATION_WORKFLOW_H_
