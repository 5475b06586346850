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

#ifndef TRIAGE_CLASSIFICATION_RULE_BASELINE_H_
#define TRIAGE_CLASSIFICATION_RULE_BASELINE_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "triage/classification/backend.h"
#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::classification {

/// Keyword tables behind the offline backend (rule_patterns.json).
struct RuleTable {
  /// Per-category substrings. Irrelevant never has patterns: it is what
  /// remains when nothing matches.
  std::vector<std::pair<CategoryId, std::vector<std::string>>> patterns;
  std::vector<std::string> affirmative;
  std::vector<std::string> negative;
  /// Fixed empathic wrapper with a {{question}} slot.
  std::string counselor_wrapper;

  static RuleTable Load(std::filesystem::path const& path);
  static RuleTable const& Default();
};

/// Case-insensitive for Latin script. Purely alphanumeric ASCII terms only
/// match on word boundaries ("no" does not match "know").
bool ContainsTerm(std::string_view haystack, std::string_view term);

/// Union of the categories whose patterns occur in the utterance; {Irrelevant}
/// when none do.
LabelSet RuleBaseline(std::string_view utterance, RuleTable const& table);

enum class AnswerPolarity { kAffirmative, kNegative, kUnclear };

/// Negative terms are checked first, so "没有" is not read as "有".
AnswerPolarity ClassifyAnswer(std::string_view reply, RuleTable const& table);

/// Deterministic offline ChatBackend. It answers from the request hints
/// instead of the prompt text:
///   kClassify       hints["utterance"] -> English label names, ", "-joined
///   kCounselorTurn  hints["question"]  -> the question inside the wrapper
///                   (hints["wrapper"] when given, else the table's)
///   kAssess         hints["answers"]   -> "RISK_LEVEL/ACTION/RATIONALE" lines
/// where "answers" is a JSON array of
///   {"qtype", "reply", "risk_when": "affirmative"|"negative", "raises_to"}.
class RuleBackend : public ChatBackend {
 public:
  RuleBackend(RuleTable table, taxonomy::Taxonomy const& taxonomy)
      : table_(std::move(table)), taxonomy_(taxonomy) {}

  std::string id() const override { return "rule-baseline"; }
  std::string Complete(ChatRequest const& request) override;

  RuleTable const& table() const { return table_; }

 private:
  std::string Assess(std::string const& answers_json) const;

  RuleTable table_;
  taxonomy::Taxonomy const& taxonomy_;
};

}  // namespace triage::classification

#endif  // TRIAGE_CLASSIFICATION_RULE_BASELINE_H_
