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

#include "triage/risk/screening.h"

#include <algorithm>

#include "triage/common/assets.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::risk {

namespace {

Error ConfigError(std::string const& what) {
  return Error(ErrorCode::kConfig, "screening bank: " + what);
}

}  // namespace

std::string_view RiskWhenName(RiskWhen when) {
  return when == RiskWhen::kAffirmative ? "affirmative" : "negative";
}

ScreeningBank ScreeningBank::FromJson(Json const& doc) {
  RejectUnknownKeys(doc, {"questions", "flows"}, "screening bank");
  ScreeningBank bank;
  try {
    for (auto const& q : doc.at("questions")) {
      RejectUnknownKeys(q, {"qtype", "text_zh", "text_en", "order_hint", "risk_when",
                            "raises_to"},
                        "screening question");
      ScreeningQuestion sq;
      sq.qtype = q.at("qtype").get<std::string>();
      sq.text_zh = q.at("text_zh").get<std::string>();
      sq.text_en = q.at("text_en").get<std::string>();
      sq.order_hint = q.at("order_hint").get<int>();
      auto const when = q.at("risk_when").get<std::string>();
      if (when == "affirmative") {
        sq.risk_when = RiskWhen::kAffirmative;
      } else if (when == "negative") {
        sq.risk_when = RiskWhen::kNegative;
      } else {
        throw ConfigError("bad risk_when '" + when + "'");
      }
      auto level = RiskLevelFromName(q.at("raises_to").get<std::string>());
      if (!level) throw ConfigError("bad raises_to for " + sq.qtype);
      sq.raises_to = *level;
      if (sq.qtype.empty() || sq.text_zh.empty() || sq.text_en.empty()) {
        throw ConfigError("question needs a qtype and both texts");
      }
      if (bank.Find(sq.qtype)) throw ConfigError("duplicate qtype " + sq.qtype);
      bank.questions_.push_back(std::move(sq));
    }
    if (bank.questions_.size() != kQuestionTypeCount) {
      throw ConfigError("expected 9 question types, got " +
                        std::to_string(bank.questions_.size()));
    }
    std::stable_sort(bank.questions_.begin(), bank.questions_.end(),
                     [](auto const& a, auto const& b) { return a.order_hint < b.order_hint; });

    for (auto const& [key, flow] : doc.at("flows").items()) {
      auto id = CategoryFromKey(key);
      if (!id) throw ConfigError("unknown category " + key);
      if (*id == CategoryId::kIrrelevant) throw ConfigError("irrelevant has no flow");
      auto& out = bank.flows_[IndexOf(*id)];
      for (auto const& qt : flow) {
        auto const qtype = qt.get<std::string>();
        if (!bank.Find(qtype)) throw ConfigError("flow " + key + " names unknown " + qtype);
        if (std::find(out.begin(), out.end(), qtype) != out.end()) {
          throw ConfigError("flow " + key + " repeats " + qtype);
        }
        out.push_back(qtype);
      }
    }
  } catch (Json::exception const& e) {
    throw ConfigError(e.what());
  }
  for (auto id : kAllCategories) {
    if (id == CategoryId::kIrrelevant) continue;
    auto const& flow = bank.flows_[IndexOf(id)];
    if (flow.empty()) {
      throw ConfigError("category " + std::string(CategoryKey(id)) + " has no questions");
    }
    for (auto const& qtype : flow) {
      for (auto& q : bank.questions_) {
        if (q.qtype == qtype) q.applicability.insert(id);
      }
    }
  }
  return bank;
}

ScreeningBank ScreeningBank::Load(std::filesystem::path const& path) {
  return FromJson(ReadJsonFile(path));
}

ScreeningBank const& ScreeningBank::Default() {
  static ScreeningBank const instance = Load(DefaultAssetDir() / "screening_questions.json");
  return instance;
}

ScreeningQuestion const* ScreeningBank::Find(std::string_view qtype) const {
  for (auto const& q : questions_) {
    if (q.qtype == qtype) return &q;
  }
  return nullptr;
}

ScreeningQuestion const* ScreeningBank::NextQuestion(CategoryId category,
                                                     std::span<std::string const> asked) const {
  for (auto const& qtype : Flow(category)) {
    if (std::find(asked.begin(), asked.end(), qtype) == asked.end()) return Find(qtype);
  }
  return nullptr;
}

}  // namespace triage::risk
