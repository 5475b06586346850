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

#ifndef TRIAGE_EVALUATION_METRICS_H_
#define TRIAGE_EVALUATION_METRICS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triage/evaluation/records.h"
#include "triage/taxonomy/label_set.h"

namespace triage::evaluation {

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct CategoryCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

using ConfusionCounts = std::array<CategoryCounts, kCategoryCount>;

// All functions below take gold and prediction aligned by position. An
// Unparseable prediction is wrong for the exact-match test and contributes a
// false negative for every gold label. Any ratio with a zero denominator is 0.

/// Exact-match (subset) accuracy.
double Accuracy(std::span<LabelSet const> gold, std::span<Prediction const> pred);

/// Per-category TP/FP/FN over label occurrences.
ConfusionCounts CountByCategory(std::span<LabelSet const> gold,
                                std::span<Prediction const> pred);

/// Pooled counts; f1 is the harmonic mean of the pooled precision and recall.
Prf MicroPrf(ConfusionCounts const& counts);

/// Unweighted mean of per-category P, R and F1 over the categories that occur
/// in gold or in predictions. Categories absent from both are left out.
Prf MacroPrf(ConfusionCounts const& counts);

Prf CategoryPrf(CategoryCounts const& c);

/// Misclassification classes used in error case studies.
enum class ErrorTag {
  /// Gold has Suicide Attempt; prediction drops it for another suicidal
  /// ideation category.
  kAttemptAsOtherSuicidal,
  /// Gold is Exploration about Suicide; prediction claims suicidal ideation.
  kExplorationAsSuicidal,
  /// Gold is Irrelevant; prediction claims suicidal ideation.
  kIrrelevantAsSuicidal,
  kUnparseable,
  kOther,
};

std::string_view ErrorTagName(ErrorTag tag);

/// std::nullopt when the prediction is correct.
std::optional<ErrorTag> TagError(LabelSet gold, Prediction const& pred);

/// Metrics of one round.
struct RoundMetrics {
  int round_index = 1;
  double accuracy = 0;
  Prf micro;
  Prf macro;
  ConfusionCounts counts{};
  std::size_t n_unparseable = 0;
  std::map<ErrorTag, std::size_t> errors;
};

RoundMetrics EvaluateRound(std::span<LabelSet const> gold,
                           std::span<Prediction const> pred, int round_index = 1);

/// Aligns a prediction run to gold by id. Throws kMismatchedIds unless both
/// cover exactly the same ids. The result follows gold's map order.
void AlignById(std::map<std::string, LabelSet> const& gold, PredictionRun const& run,
               std::vector<LabelSet>& gold_out, std::vector<Prediction>& pred_out);

}  // namespace triage::evaluation

#endif  // TRIAGE_EVALUATION_METRICS_H_
