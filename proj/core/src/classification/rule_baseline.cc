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

#include "triage/classification/rule_baseline.h"

#include <algorithm>
#include <array>

#include "triage/classification/prompt.h"
#include "triage/common/assets.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"

namespace triage::classification {

namespace {

bool IsAsciiAlnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

bool IsAsciiWordTerm(std::string_view term) {
  return !term.empty() && IsAsciiAlnum(term.front()) && IsAsciiAlnum(term.back()) &&
         std::all_of(term.begin(), term.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

constexpr std::array<std::string_view, 4> kLevels = {"Low", "Moderate", "High",
                                                     "Severe"};

int LevelIndex(std::string_view level) {
  for (std::size_t i = 0; i < kLevels.size(); ++i) {
    if (kLevels[i] == level) return static_cast<int>(i);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown risk level '" + std::string(level) + "'");
}

std::string_view ActionFor(int level) {
  switch (level) {
    case 0: return "ContinueSupport";
    case 3: return "Hotline";
    default: return "ReferCounselor";
  }
}

}  // namespace

RuleTable RuleTable::Load(std::filesystem::path const& path) {
  auto const doc = ReadJsonFile(path);
  RejectUnknownKeys(doc, {"categories", "affirmative", "negative", "counselor_wrapper"},
                    "rule table");
  RuleTable table;
  try {
    for (auto const& [key, terms] : doc.at("categories").items()) {
      auto id = CategoryFromKey(key);
      if (!id) throw Error(ErrorCode::kConfig, "rule table: unknown category " + key);
      if (*id == CategoryId::kIrrelevant) {
        throw Error(ErrorCode::kConfig, "rule table: irrelevant takes no patterns");
      }
      table.patterns.emplace_back(*id, terms.get<std::vector<std::string>>());
    }
    table.affirmative = doc.at("affirmative").get<std::vector<std::string>>();
    table.negative = doc.at("negative").get<std::vector<std::string>>();
    table.counselor_wrapper = doc.at("counselor_wrapper").get<std::string>();
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kConfig, std::string("rule table: ") + e.what());
  }
  std::sort(table.patterns.begin(), table.patterns.end(),
            [](auto const& a, auto const& b) { return a.first < b.first; });
  return table;
}

RuleTable const& RuleTable::Default() {
  static RuleTable const instance = Load(DefaultAssetDir() / "rule_patterns.json");
  return instance;
}

bool ContainsTerm(std::string_view haystack, std::string_view term) {
  if (term.empty()) return false;
  auto const hay = text::AsciiLower(haystack);
  auto const needle = text::AsciiLower(term);
  bool const word = IsAsciiWordTerm(needle);
  std::size_t pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    if (!word) return true;
    bool const left_ok = pos == 0 || !IsAsciiAlnum(hay[pos - 1]);
    auto const end = pos + needle.size();
    bool const right_ok = end >= hay.size() || !IsAsciiAlnum(hay[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

LabelSet RuleBaseline(std::string_view utterance, RuleTable const& table) {
  std::vector<CategoryId> hits;
  for (auto const& [id, terms] : table.patterns) {
    for (auto const& term : terms) {
      if (ContainsTerm(utterance, term)) {
        hits.push_back(id);
        break;
      }
    }
  }
  if (hits.empty()) return LabelSet::Of({CategoryId::kIrrelevant});
  return LabelSet::Of(hits);
}

AnswerPolarity ClassifyAnswer(std::string_view reply, RuleTable const& table) {
  for (auto const& t : table.negative) {
    if (ContainsTerm(reply, t)) return AnswerPolarity::kNegative;
  }
  for (auto const& t : table.affirmative) {
    if (ContainsTerm(reply, t)) return AnswerPolarity::kAffirmative;
  }
  return AnswerPolarity::kUnclear;
}

std::string RuleBackend::Complete(ChatRequest const& request) {
  auto hint = [&](std::string const& key) -> std::string const& {
    auto it = request.hints.find(key);
    if (it == request.hints.end()) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "rule backend needs hint '" + key + "'");
    }
    return it->second;
  };
  switch (request.task) {
    case Task::kClassify:
      return taxonomy_.FormatLabels(RuleBaseline(hint("utterance"), table_));
    case Task::kCounselorTurn: {
      auto it = request.hints.find("wrapper");
      auto const& wrapper =
          it == request.hints.end() ? table_.counselor_wrapper : it->second;
      return RenderTemplate(wrapper, {{"question", hint("question")}});
    }
    case Task::kAssess:
      return Assess(hint("answers"));
  }
  throw Error(ErrorCode::kBackendUnavailable, "rule backend: unknown task");
}

std::string RuleBackend::Assess(std::string const& answers_json) const {
  Json answers;
  try {
    answers = Json::parse(answers_json);
  } catch (Json::parse_error const& e) {
    throw Error(ErrorCode::kBackendUnavailable,
                std::string("rule backend: bad answers hint: ") + e.what());
  }
  int level = 0;
  std::vector<std::string> reasons;
  for (auto const& a : answers) {
    auto const polarity = ClassifyAnswer(a.at("reply").get<std::string>(), table_);
    auto const risk_when = a.at("risk_when").get<std::string>();
    auto const qtype = a.at("qtype").get<std::string>();
    bool const risky =
        (risk_when == "affirmative" && polarity == AnswerPolarity::kAffirmative) ||
        (risk_when == "negative" && polarity == AnswerPolarity::kNegative);
    if (risky) {
      auto const raised = LevelIndex(a.at("raises_to").get<std::string>());
      if (raised > level) level = raised;
      reasons.push_back(qtype);
    } else if (polarity == AnswerPolarity::kUnclear) {
      // An answer we cannot read never counts as reassurance.
      level = std::max(level, 1);
      reasons.push_back(qtype + "(unclear)");
    }
  }
  std::string out = "RISK_LEVEL: " + std::string(kLevels[level]) + "\n";
  out += "ACTION: " + std::string(ActionFor(level)) + "\n";
  out += "RATIONALE: ";
  out += reasons.empty() ? "no risk indicators in screening answers"
                         : "risk indicators: " + text::Join(reasons, ", ");
  return out;
}

}  // namespace triage::classification
