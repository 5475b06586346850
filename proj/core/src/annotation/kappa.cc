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

#include "triage/annotation/kappa.h"

#include <map>

#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::annotation {

namespace {

// Keeps (N*n)^2 * (n-1) comfortably inside int64.
constexpr std::int64_t kMaxVotes = std::int64_t{1} << 28;

Error Uneven(std::string const& what) { return Error(ErrorCode::kUnevenRaters, what); }

}  // namespace

Json VoteToJson(Vote const& vote) {
  return {{"annotator_id", vote.annotator_id},
          {"instance_id", vote.instance_id},
          {"labels", vote.labels.Keys()},
          {"multi_label", vote.multi_label_flag()},
          {"timestamp_ms", vote.timestamp_ms}};
}

Vote VoteFromJson(Json const& doc) {
  RejectUnknownKeys(doc, {"annotator_id", "instance_id", "labels", "multi_label",
                          "timestamp_ms"},
                    "vote");
  Vote v;
  try {
    v.annotator_id = RequireMember(doc, "annotator_id").get<std::string>();
    v.instance_id = RequireMember(doc, "instance_id").get<std::string>();
    v.labels = LabelSet::FromKeys(RequireMember(doc, "labels").get<std::vector<std::string>>());
    v.timestamp_ms = doc.value("timestamp_ms", std::int64_t{0});
    if (doc.contains("multi_label") &&
        doc["multi_label"].get<bool>() != v.multi_label_flag()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vote multi_label flag disagrees with its label count");
    }
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kParse, std::string("vote: ") + e.what());
  }
  if (v.annotator_id.empty() || v.instance_id.empty()) {
    throw Error(ErrorCode::kParse, "vote: empty annotator or instance id");
  }
  return v;
}

Json KappaReportToJson(KappaReport const& r) {
  return {{"kappa", r.kappa},
          {"observed_agreement", r.observed_agreement},
          {"expected_agreement", r.expected_agreement},
          {"n_items", r.n_items},
          {"n_raters", r.n_raters},
          {"category_marginals", r.category_marginals}};
}

KappaReport KappaReportFromJson(Json const& doc) {
  KappaReport r;
  try {
    r.kappa = doc.at("kappa").get<double>();
    r.observed_agreement = doc.at("observed_agreement").get<double>();
    r.expected_agreement = doc.at("expected_agreement").get<double>();
    r.n_items = doc.at("n_items").get<std::size_t>();
    r.n_raters = doc.at("n_raters").get<std::size_t>();
    r.category_marginals = doc.at("category_marginals").get<std::vector<double>>();
  } catch (Json::exception const& e) {
    throw Error(ErrorCode::kParse, std::string("kappa report: ") + e.what());
  }
  return r;
}

KappaReport FleissKappa(std::span<std::vector<std::int64_t> const> table) {
  if (table.empty()) throw Uneven("kappa needs at least one item");
  auto const k = table.front().size();
  if (k == 0) throw Uneven("kappa needs at least one category");

  std::int64_t n = -1;
  std::int64_t agree = 0;  // sum over items and categories of n_ij (n_ij - 1)
  std::vector<std::int64_t> totals(k, 0);
  for (auto const& row : table) {
    if (row.size() != k) throw Uneven("kappa table rows differ in width");
    std::int64_t raters = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (row[j] < 0) throw Error(ErrorCode::kInvalidArgument, "negative vote count");
      raters += row[j];
      agree += row[j] * (row[j] - 1);
      totals[j] += row[j];
    }
    if (n < 0) n = raters;
    if (raters != n) throw Uneven("items have different numbers of votes");
  }
  if (n < 2) throw Uneven("kappa needs at least two raters per item");

  auto const items = static_cast<std::int64_t>(table.size());
  auto const votes = items * n;
  if (votes > kMaxVotes) throw Error(ErrorCode::kInvalidArgument, "kappa table too large");
  std::int64_t totals_sq = 0;
  for (auto t : totals) totals_sq += t * t;
  auto const votes_sq = votes * votes;

  KappaReport r;
  r.n_items = static_cast<std::size_t>(items);
  r.n_raters = static_cast<std::size_t>(n);
  r.observed_agreement =
      static_cast<double>(agree) / static_cast<double>(votes * (n - 1));
  r.expected_agreement = static_cast<double>(totals_sq) / static_cast<double>(votes_sq);
  for (auto t : totals) {
    r.category_marginals.push_back(static_cast<double>(t) / static_cast<double>(votes));
  }
  if (totals_sq == votes_sq) {
    if (agree != votes * (n - 1)) {
      throw Error(ErrorCode::kDegenerateMarginals,
                  "expected agreement is 1 but items disagree");
    }
    r.kappa = 1.0;
    return r;
  }
  // (P - Pe) / (1 - Pe) with P = A / (N n (n-1)) and Pe = T2 / (N n)^2.
  auto const num = agree * votes - totals_sq * (n - 1);
  auto const den = (n - 1) * (votes_sq - totals_sq);
  r.kappa = static_cast<double>(num) / static_cast<double>(den);
  return r;
}

BatchKappa ComputeBatchKappa(std::span<std::string const> instance_ids,
                             std::span<Vote const> votes,
                             taxonomy::Taxonomy const& taxonomy) {
  std::map<std::string, std::size_t, std::less<>> row_of;
  for (std::size_t i = 0; i < instance_ids.size(); ++i) row_of[instance_ids[i]] = i;

  std::vector<std::vector<std::int64_t>> table(
      instance_ids.size(), std::vector<std::int64_t>(kCategoryCount, 0));
  std::array<std::vector<std::vector<std::int64_t>>, kCategoryCount> binary;
  for (auto& b : binary) {
    b.assign(instance_ids.size(), std::vector<std::int64_t>(2, 0));
  }
  std::array<bool, kCategoryCount> used{};
  for (auto const& v : votes) {
    auto it = row_of.find(v.instance_id);
    if (it == row_of.end()) {
      throw Error(ErrorCode::kNotFound, "vote for unknown instance '" + v.instance_id + "'");
    }
    auto const row = it->second;
    ++table[row][IndexOf(taxonomy.MaxRisk(v.labels))];
    for (auto id : kAllCategories) {
      bool const has = v.labels.Contains(id);
      ++binary[IndexOf(id)][row][has ? 1 : 0];
      used[IndexOf(id)] = used[IndexOf(id)] || has;
    }
  }

  BatchKappa out;
  out.overall = FleissKappa(table);
  for (auto id : kAllCategories) {
    if (used[IndexOf(id)]) out.per_category[IndexOf(id)] = FleissKappa(binary[IndexOf(id)]);
  }
  return out;
}

Json BatchKappaToJson(BatchKappa const& kappa) {
  Json doc = KappaReportToJson(kappa.overall);
  Json marginals = Json::object();
  for (auto id : kAllCategories) {
    marginals[std::string(CategoryKey(id))] =
        kappa.overall.category_marginals.at(IndexOf(id));
  }
  doc["category_marginals_by_key"] = std::move(marginals);
  Json per = Json::object();
  for (auto id : kAllCategories) {
    if (auto const& r = kappa.per_category[IndexOf(id)]) {
      per[std::string(CategoryKey(id))] = r->kappa;
    }
  }
  doc["per_category_binary_kappa"] = std::move(per);
  return doc;
}

std::string_view GateDecisionName(GateDecision decision) {
  return decision == GateDecision::kAccepted ? "accepted" : "rejected";
}

GateDecision QualityGate(double kappa, double threshold) {
  return kappa < threshold ? GateDecision::kRejected : GateDecision::kAccepted;
}

}  // namespace triage::annotation
