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

#include "triage/evaluation/metrics.h"

#include "triage/common/error.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::evaluation {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double Harmonic(double p, double r) {
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

void CheckAligned(std::size_t gold, std::size_t pred) {
  if (gold != pred) {
    throw Error(ErrorCode::kMismatchedIds,
                "gold has " + std::to_string(gold) + " instances, predictions " +
                    std::to_string(pred));
  }
}

bool HasSuicidal(LabelSet labels) {
  for (auto id : labels.Members()) {
    if (taxonomy::GroupOf(id) == taxonomy::Group::kSuicidalIdeation) return true;
  }
  return false;
}

}  // namespace

double Accuracy(std::span<LabelSet const> gold, std::span<Prediction const> pred) {
  CheckAligned(gold.size(), pred.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] && *pred[i] == gold[i]) ++correct;
  }
  return Ratio(correct, gold.size());
}

ConfusionCounts CountByCategory(std::span<LabelSet const> gold,
                                std::span<Prediction const> pred) {
  CheckAligned(gold.size(), pred.size());
  ConfusionCounts counts{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (auto id : kAllCategories) {
      bool const g = gold[i].Contains(id);
      bool const p = pred[i] && pred[i]->Contains(id);
      auto& c = counts[IndexOf(id)];
      if (g && p) ++c.tp;
      if (!g && p) ++c.fp;
      if (g && !p) ++c.fn;
    }
  }
  return counts;
}

Prf CategoryPrf(CategoryCounts const& c) {
  Prf out;
  out.precision = Ratio(c.tp, c.tp + c.fp);
  out.recall = Ratio(c.tp, c.tp + c.fn);
  out.f1 = Harmonic(out.precision, out.recall);
  return out;
}

Prf MicroPrf(ConfusionCounts const& counts) {
  CategoryCounts pooled;
  for (auto const& c : counts) {
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
  }
  return CategoryPrf(pooled);
}

Prf MacroPrf(ConfusionCounts const& counts) {
  Prf sum;
  std::size_t present = 0;
  for (auto const& c : counts) {
    if (c.tp + c.fp + c.fn == 0) continue;
    auto const prf = CategoryPrf(c);
    sum.precision += prf.precision;
    sum.recall += prf.recall;
    sum.f1 += prf.f1;
    ++present;
  }
  if (present == 0) return {};
  auto const n = static_cast<double>(present);
  return {sum.precision / n, sum.recall / n, sum.f1 / n};
}

std::string_view ErrorTagName(ErrorTag tag) {
  switch (tag) {
    case ErrorTag::kAttemptAsOtherSuicidal: return "attempt_as_other_suicidal";
    case ErrorTag::kExplorationAsSuicidal: return "exploration_as_suicidal";
    case ErrorTag::kIrrelevantAsSuicidal: return "irrelevant_as_suicidal";
    case ErrorTag::kUnparseable: return "unparseable";
    case ErrorTag::kOther: return "other";
  }
  return "other";
}

std::optional<ErrorTag> TagError(LabelSet gold, Prediction const& pred) {
  if (!pred) return ErrorTag::kUnparseable;
  if (*pred == gold) return std::nullopt;
  if (gold.Contains(CategoryId::kSuicideAttempt) &&
      !pred->Contains(CategoryId::kSuicideAttempt) && HasSuicidal(*pred)) {
    return ErrorTag::kAttemptAsOtherSuicidal;
  }
  if (gold.Contains(CategoryId::kExplorationAboutSuicide) && !HasSuicidal(gold) &&
      HasSuicidal(*pred)) {
    return ErrorTag::kExplorationAsSuicidal;
  }
  if (gold.IsIrrelevantOnly() && HasSuicidal(*pred)) {
    return ErrorTag::kIrrelevantAsSuicidal;
  }
  return ErrorTag::kOther;
}

RoundMetrics EvaluateRound(std::span<LabelSet const> gold,
                           std::span<Prediction const> pred, int round_index) {
  RoundMetrics m;
  m.round_index = round_index;
  m.accuracy = Accuracy(gold, pred);
  m.counts = CountByCategory(gold, pred);
  m.micro = MicroPrf(m.counts);
  m.macro = MacroPrf(m.counts);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!pred[i]) ++m.n_unparseable;
    if (auto tag = TagError(gold[i], pred[i])) ++m.errors[*tag];
  }
  return m;
}

void AlignById(std::map<std::string, LabelSet> const& gold, PredictionRun const& run,
               std::vector<LabelSet>& gold_out, std::vector<Prediction>& pred_out) {
  gold_out.clear();
  pred_out.clear();
  for (auto const& [id, labels] : gold) {
    auto it = run.predictions.find(id);
    if (it == run.predictions.end()) {
      throw Error(ErrorCode::kMismatchedIds, "round " + std::to_string(run.round_index) +
                                                 " has no prediction for '" + id + "'");
    }
    gold_out.push_back(labels);
    pred_out.push_back(it->second);
  }
  if (run.predictions.size() != gold.size()) {
    for (auto const& [id, p] : run.predictions) {
      if (!gold.contains(id)) {
        throw Error(ErrorCode::kMismatchedIds, "round " +
                                                   std::to_string(run.round_index) +
                                                   " predicts unknown id '" + id + "'");
      }
    }
  }
}

}  // namespace triage::evaluation
