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

#ifndef TRIAGE_EVALUATION_REPORT_H_
#define TRIAGE_EVALUATION_REPORT_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/evaluation/metrics.h"
#include "triage/evaluation/records.h"

namespace triage::evaluation {

struct MeanStd {
  double mean = 0;
  double std = 0;
};

/// Arithmetic mean and sample standard deviation (n - 1 denominator, 0 for a
/// single value). Throws kInvalidArgument on empty input.
MeanStd MeanAndSampleStd(std::span<double const> values);

/// "mean_{std}" with two decimals, e.g. "91.69_{0.39}". Values are printed
/// as given, so pass percentages.
std::string FormatMeanStd(MeanStd value);

enum class Metric { kAccuracy, kMicroP, kMicroR, kMicroF1, kMacroP, kMacroR, kMacroF1 };

inline constexpr std::array<Metric, 7> kReportedMetrics = {
    Metric::kAccuracy, Metric::kMicroP, Metric::kMicroR, Metric::kMicroF1,
    Metric::kMacroP,   Metric::kMacroR, Metric::kMacroF1,
};

std::string_view MetricName(Metric metric);
double MetricValue(RoundMetrics const& round, Metric metric);

struct MetricsReport {
  std::string model;
  std::vector<RoundMetrics> rounds;
  /// Indexed like kReportedMetrics; mean and std of the per-round values in
  /// percent.
  std::array<MeanStd, kReportedMetrics.size()> summary{};
  std::size_t n_instances = 0;
  std::size_t n_multi_label_instances = 0;
  /// Gold label occurrences; exceeds n_instances when multi-label gold exists.
  std::size_t n_label_occurrences = 0;

  MeanStd const& operator[](Metric m) const {
    return summary[static_cast<std::size_t>(m)];
  }
};

/// Fills `summary` from per-round metrics. Throws kInvalidArgument when empty.
MetricsReport AggregateRounds(std::vector<RoundMetrics> rounds);

/// Evaluates every prediction run against the labeled records.
MetricsReport Evaluate(std::span<UtteranceRecord const> gold,
                       std::span<PredictionRun const> runs, std::string model);

/// Stable JSON form. Records the accuracy convention (exact match over label
/// sets) and both instance and label-occurrence counts.
nlohmann::json ReportToJson(MetricsReport const& report);

/// Tab-separated header and row in the column order of kReportedMetrics.
std::string TableHeader();
std::string TableRow(MetricsReport const& report);

}  // namespace triage::evaluation

#endif  // TRIAGE_EVALUATION_REPORT_H_
