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

#include "triage/annotation/workflow.h"

#include <algorithm>
#include <set>

#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::annotation {

namespace {

Error NotFound(std::string const& what) { return Error(ErrorCode::kNotFound, what); }

Error WrongState(std::string const& what) { return Error(ErrorCode::kWrongState, what); }

}  // namespace

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kTrial: return "trial";
    case Phase::kMiniBatch: return "mini_batch";
    case Phase::kLargeScale: return "large_scale";
  }
  return "large_scale";
}

std::optional<Phase> PhaseFromName(std::string_view name) {
  for (auto p : {Phase::kTrial, Phase::kMiniBatch, Phase::kLargeScale}) {
    if (PhaseName(p) == name) return p;
  }
  return std::nullopt;
}

PhasePreset const& PresetFor(Phase phase) {
  static PhasePreset const trial{Phase::kTrial, {200, 300, 300}, 0.5};
  static PhasePreset const mini{Phase::kMiniBatch, std::vector<std::size_t>(5, 100), 0.6};
  static PhasePreset const large{Phase::kLargeScale, std::vector<std::size_t>(27, 500), 0.6};
  switch (phase) {
    case Phase::kTrial: return trial;
    case Phase::kMiniBatch: return mini;
    case Phase::kLargeScale: return large;
  }
  return large;
}

std::string_view BatchStatusName(BatchStatus status) {
  switch (status) {
    case BatchStatus::kOpen: return "open";
    case BatchStatus::kAwaitingAdjudication: return "awaiting_adjudication";
    case BatchStatus::kAccepted: return "accepted";
  }
  return "open";
}

Json NewBatchToJson(NewBatch const& b) {
  Json instances = Json::array();
  for (auto const& i : b.instances) {
    instances.push_back(
        {{"id", i.id}, {"text", i.text}, {"source", evaluation::SourceName(i.source)}});
  }
  Json doc = {{"batch_id", b.batch_id},
              {"phase", PhaseName(b.phase)},
              {"instances", std::move(instances)},
              {"annotators", b.annotators}};
  if (b.gate_threshold) doc["gate_threshold"] = *b.gate_threshold;
  return doc;
}

NewBatch NewBatchFromJson(Json const& doc) {
  RejectUnknownKeys(doc, {"batch_id", "phase", "instances", "annotators", "gate_threshold"},
                    "batch");
  NewBatch b;
  try {
    b.batch_id = RequireMember(doc, "batch_id").get<std::string>();
    auto const phase = doc.value("phase", std::string("large_scale"));
    auto p = PhaseFromName(phase);
    if (!p) throw Error(ErrorCode::kInvalidArgument, "unknown phase '" + phase + "'");
    b.phase = *p;
    for (auto const& i : RequireMember(doc, "instances")) {
      BatchInstance inst;
      inst.id = i.at("id").get<std::string>();
      inst.text = i.at("text").get<std::string>();
      if (i.contains("source")) {
        auto s = evaluation::SourceFromName(i["source"].get<std::string>());
        if (!s) throw Error(ErrorCode::kInvalidArgument, "unknown source");
        inst.source = *s;
      }
      b.instances.push_back(std::move(inst));
    }
    b.annotators = RequireMember(doc, "annotators").get<std::vector<std::string>>();
    if (doc.contains("gate_threshold")) b.gate_threshold = doc["gate_threshold"].get<double>();
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("batch: ") + e.what());
  }
  return b;
}

Batch const& Workflow::CreateBatch(NewBatch spec) {
  if (spec.batch_id.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch id");
  if (batches_.contains(spec.batch_id)) {
    throw Error(ErrorCode::kInvalidArgument, "batch '" + spec.batch_id + "' already exists");
  }
  std::set<std::string> annotators(spec.annotators.begin(), spec.annotators.end());
  if (spec.annotators.size() != kAnnotatorsPerInstance ||
      annotators.size() != kAnnotatorsPerInstance || annotators.contains("")) {
    throw Error(ErrorCode::kInvalidArgument, "a batch needs three distinct annotators");
  }
  if (spec.instances.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  std::set<std::string> ids;
  for (auto const& i : spec.instances) {
    if (i.id.empty() || i.text.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "instance needs an id and text");
    }
    if (!ids.insert(i.id).second || batch_of_instance_.contains(i.id)) {
      throw Error(ErrorCode::kInvalidArgument, "instance '" + i.id + "' is already assigned");
    }
  }
  auto const threshold = spec.gate_threshold.value_or(PresetFor(spec.phase).gate_threshold);
  if (!(threshold >= -1 && threshold <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "gate threshold must lie in [-1, 1]");
  }

  Batch b;
  b.batch_id = spec.batch_id;
  b.phase = spec.phase;
  b.instances = std::move(spec.instances);
  b.annotators = std::move(spec.annotators);
  b.gate_threshold = threshold;
  for (auto const& i : b.instances) batch_of_instance_[i.id] = b.batch_id;
  order_.push_back(b.batch_id);
  return batches_.emplace(b.batch_id, std::move(b)).first->second;
}

Batch& Workflow::MutableBatch(std::string const& batch_id) {
  auto it = batches_.find(batch_id);
  if (it == batches_.end()) throw NotFound("unknown batch '" + batch_id + "'");
  return it->second;
}

Batch const& Workflow::batch(std::string const& batch_id) const {
  auto it = batches_.find(batch_id);
  if (it == batches_.end()) throw NotFound("unknown batch '" + batch_id + "'");
  return it->second;
}

void Workflow::SubmitVote(std::string const& batch_id, Vote vote) {
  auto& b = MutableBatch(batch_id);
  if (b.status != BatchStatus::kOpen) {
    throw WrongState("batch '" + batch_id + "' is " + std::string(BatchStatusName(b.status)));
  }
  auto it = batch_of_instance_.find(vote.instance_id);
  if (it == batch_of_instance_.end() || it->second != batch_id) {
    throw NotFound("instance '" + vote.instance_id + "' is not in batch '" + batch_id + "'");
  }
  if (std::find(b.annotators.begin(), b.annotators.end(), vote.annotator_id) ==
      b.annotators.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "'" + vote.annotator_id + "' is not assigned to batch '" + batch_id + "'");
  }
  auto& slot = votes_[vote.instance_id];
  auto const annotator = vote.annotator_id;
  slot.insert_or_assign(annotator, std::move(vote));
}

GateOutcome Workflow::CloseBatch(std::string const& batch_id) {
  auto& b = MutableBatch(batch_id);
  if (b.status != BatchStatus::kOpen) {
    throw WrongState("batch '" + batch_id + "' is " + std::string(BatchStatusName(b.status)));
  }
  std::vector<std::string> ids;
  std::vector<Vote> all;
  for (auto const& inst : b.instances) {
    ids.push_back(inst.id);
    auto it = votes_.find(inst.id);
    auto const have = it == votes_.end() ? 0 : it->second.size();
    if (have != kAnnotatorsPerInstance) {
      throw Error(ErrorCode::kUnevenRaters, "instance '" + inst.id + "' has " +
                                                std::to_string(have) + " of 3 votes");
    }
    for (auto const& [annotator, v] : it->second) all.push_back(v);
  }

  GateOutcome out{GateDecision::kRejected, ComputeBatchKappa(ids, all, *taxonomy_), {}, {}};
  out.decision = QualityGate(out.kappa.overall.kappa, b.gate_threshold);
  b.kappa = out.kappa;
  b.last_gate = out.decision;
  if (out.decision == GateDecision::kRejected) {
    ++b.rejections;
    return out;
  }
  for (auto const& inst : b.instances) {
    auto const votes = VotesFor(inst.id);
    auto result = Adjudicate(votes);
    if (auto* r = std::get_if<Resolution>(&result)) {
      resolutions_.insert_or_assign(inst.id, *r);
      out.majority.push_back(*r);
    } else {
      auto const& d = std::get<DiscussionRequired>(result);
      pending_.insert_or_assign(inst.id, d);
      out.discussions.push_back(d);
    }
  }
  b.status = out.discussions.empty() ? BatchStatus::kAccepted
                                     : BatchStatus::kAwaitingAdjudication;
  return out;
}

Resolution Workflow::SubmitResolution(std::string const& instance_id, LabelSet final_labels,
                                      std::vector<std::string> const& acknowledged_by) {
  auto it = pending_.find(instance_id);
  if (it == pending_.end()) {
    throw NotFound("no discussion pending for '" + instance_id + "'");
  }
  auto& b = MutableBatch(batch_of_instance_.at(instance_id));
  auto r = ResolveByDiscussion(instance_id, final_labels, b.annotators, acknowledged_by);
  pending_.erase(it);
  resolutions_.insert_or_assign(instance_id, r);
  bool const done = std::none_of(b.instances.begin(), b.instances.end(),
                                 [&](BatchInstance const& i) { return pending_.contains(i.id); });
  if (done) b.status = BatchStatus::kAccepted;
  return r;
}

std::vector<PageItem> Workflow::Page(std::string const& batch_id, std::string const& annotator,
                                     std::size_t offset, std::size_t limit) const {
  auto const& b = batch(batch_id);
  std::vector<PageItem> page;
  for (std::size_t i = offset; i < b.instances.size() && page.size() < limit; ++i) {
    PageItem item{b.instances[i], std::nullopt};
    if (auto it = votes_.find(b.instances[i].id); it != votes_.end()) {
      if (auto v = it->second.find(annotator); v != it->second.end()) item.my_vote = v->second;
    }
    page.push_back(std::move(item));
  }
  return page;
}

std::vector<Vote> Workflow::VotesFor(std::string const& instance_id) const {
  std::vector<Vote> out;
  if (auto it = votes_.find(instance_id); it != votes_.end()) {
    for (auto const& [annotator, v] : it->second) out.push_back(v);
  }
  return out;
}

std::vector<DiscussionItem> Workflow::Discussions() const {
  std::vector<DiscussionItem> out;
  for (auto const& batch_id : order_) {
    for (auto const& inst : batches_.at(batch_id).instances) {
      if (auto it = pending_.find(inst.id); it != pending_.end()) {
        out.push_back({batch_id, it->second, VotesFor(inst.id)});
      }
    }
  }
  return out;
}

std::optional<Resolution> Workflow::ResolutionFor(std::string const& instance_id) const {
  auto it = resolutions_.find(instance_id);
  if (it == resolutions_.end()) return std::nullopt;
  return it->second;
}

std::vector<evaluation::UtteranceRecord> Workflow::Export() const {
  std::vector<evaluation::UtteranceRecord> out;
  for (auto const& batch_id : order_) {
    auto const& b = batches_.at(batch_id);
    if (b.status != BatchStatus::kAccepted) continue;
    for (auto const& inst : b.instances) {
      evaluation::UtteranceRecord r;
      r.id = inst.id;
      r.text = inst.text;
      r.source = inst.source;
      r.gold_labels = resolutions_.at(inst.id).final_labels;
      out.push_back(std::move(r));
    }
  }
  return out;
}

Json Workflow::ToJson() const {
  Json batches = Json::array();
  for (auto const& batch_id : order_) {
    auto const& b = batches_.at(batch_id);
    Json instances = Json::array();
    for (auto const& inst : b.instances) {
      Json votes = Json::array();
      for (auto const& v : VotesFor(inst.id)) votes.push_back(VoteToJson(v));
      Json entry = {{"id", inst.id},
                    {"text", inst.text},
                    {"source", evaluation::SourceName(inst.source)},
                    {"votes", std::move(votes)}};
      if (auto r = ResolutionFor(inst.id)) entry["resolution"] = ResolutionToJson(*r);
      if (auto it = pending_.find(inst.id); it != pending_.end()) {
        entry["discussion"] = DiscussionReasonName(it->second.reason);
      }
      instances.push_back(std::move(entry));
    }
    Json doc = {{"batch_id", b.batch_id},
                {"phase", PhaseName(b.phase)},
                {"annotators", b.annotators},
                {"gate_threshold", b.gate_threshold},
                {"status", BatchStatusName(b.status)},
                {"rejections", b.rejections},
                {"instances", std::move(instances)}};
    if (b.kappa) doc["kappa"] = BatchKappaToJson(*b.kappa);
    if (b.last_gate) doc["last_gate"] = GateDecisionName(*b.last_gate);
    batches.push_back(std::move(doc));
  }
  return {{"batches", std::move(batches)}};
}

}  // namespace triage::annotation
