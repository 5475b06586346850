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

#include "triage/evaluation/report.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::evaluation {

MeanStd MeanAndSampleStd(std::span<double const> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot aggregate zero rounds");
  }
  double sum = 0;
  for (double v : values) sum += v;
  auto const n = static_cast<double>(values.size());
  MeanStd out;
  out.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1));
  }
  return out;
}

std::string FormatMeanStd(MeanStd value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f_{%.2f}", value.mean, value.std);
  return buf;
}

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return "accuracy";
    case Metric::kMicroP: return "micro_p";
    case Metric::kMicroR: return "micro_r";
    case Metric::kMicroF1: return "micro_f1";
    case Metric::kMacroP: return "macro_p";
    case Metric::kMacroR: return "macro_r";
    case Metric::kMacroF1: return "macro_f1";
  }
  return "";
}

double MetricValue(RoundMetrics const& round, Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return round.accuracy;
    case Metric::kMicroP: return round.micro.precision;
    case Metric::kMicroR: return round.micro.recall;
    case Metric::kMicroF1: return round.micro.f1;
    case Metric::kMacroP: return round.macro.precision;
    case Metric::kMacroR: return round.macro.recall;
    case Metric::kMacroF1: return round.macro.f1;
  }
  return 0;
}

MetricsReport AggregateRounds(std::vector<RoundMetrics> rounds) {
  if (rounds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot aggregate zero rounds");
  }
  MetricsReport report;
  report.rounds = std::move(rounds);
  for (std::size_t m = 0; m < kReportedMetrics.size(); ++m) {
    std::vector<double> pct;
    for (auto const& r : report.rounds) {
      pct.push_back(100.0 * MetricValue(r, kReportedMetrics[m]));
    }
    report.summary[m] = MeanAndSampleStd(pct);
  }
  return report;
}

MetricsReport Evaluate(std::span<UtteranceRecord const> gold,
                       std::span<PredictionRun const> runs, std::string model) {
  std::map<std::string, LabelSet> gold_by_id;
  std::size_t multi = 0;
  std::size_t occurrences = 0;
  for (auto const& r : gold) {
    if (!r.gold_labels) {
      throw Error(ErrorCode::kUnlabeledRecord, "record '" + r.id + "' has no gold labels");
    }
    gold_by_id.emplace(r.id, *r.gold_labels);
    if (r.gold_labels->IsMultiLabel()) ++multi;
    occurrences += r.gold_labels->size();
  }
  std::vector<RoundMetrics> rounds;
  std::vector<LabelSet> g;
  std::vector<Prediction> p;
  for (auto const& run : runs) {
    AlignById(gold_by_id, run, g, p);
    rounds.push_back(EvaluateRound(g, p, run.round_index));
  }
  auto report = AggregateRounds(std::move(rounds));
  report.model = std::move(model);
  report.n_instances = gold_by_id.size();
  report.n_multi_label_instances = multi;
  report.n_label_occurrences = occurrences;
  return report;
}

Json ReportToJson(MetricsReport const& report) {
  Json rounds = Json::array();
  for (auto const& r : report.rounds) {
    Json round = {{"round", r.round_index}, {"unparseable", r.n_unparseable}};
    for (auto m : kReportedMetrics) round[std::string(MetricName(m))] = MetricValue(r, m);
    Json per_category = Json::object();
    for (auto id : kAllCategories) {
      auto const& c = r.counts[IndexOf(id)];
      if (c.tp + c.fp + c.fn == 0) continue;
      auto const prf = CategoryPrf(c);
      per_category[std::string(CategoryKey(id))] = {
          {"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn},
          {"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
    }
    round["per_category"] = std::move(per_category);
    Json errors = Json::object();
    for (auto const& [tag, n] : r.errors) errors[std::string(ErrorTagName(tag))] = n;
    round["errors"] = std::move(errors);
    rounds.push_back(std::move(round));
  }
  Json summary = Json::object();
  for (std::size_t m = 0; m < kReportedMetrics.size(); ++m) {
    auto const& v = report.summary[m];
    summary[std::string(MetricName(kReportedMetrics[m]))] = {
        {"mean", v.mean}, {"std", v.std}, {"cell", FormatMeanStd(v)}};
  }
  return {
      {"model", report.model},
      {"accuracy_mode", "exact_match"},
      {"macro_average", "present_categories"},
      {"unparseable_policy", "incorrect"},
      {"n_instances", report.n_instances},
      {"n_multi_label_instances", report.n_multi_label_instances},
      {"n_label_occurrences", report.n_label_occurrences},
      {"rounds", std::move(rounds)},
      {"summary", std::move(summary)},
  };
}

std::string TableHeader() {
  std::string out = "model";
  for (auto m : kReportedMetrics) {
    out += '\t';
    out += MetricName(m);
  }
  return out;
}

std::string TableRow(MetricsReport const& report) {
  std::string out = report.model;
  for (auto const& v : report.summary) {
    out += '\t';
    out += FormatMeanStd(v);
  }
  return out;
}

}  // namespace triage::evaluation
