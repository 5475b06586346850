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

#include "triage/annotation/ingest.h"

#include <unordered_set>

#include "triage/common/assets.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"

namespace triage::annotation {

std::vector<UtteranceRecord> Dedup(std::span<UtteranceRecord const> records) {
  std::unordered_set<std::string> seen;
  std::vector<UtteranceRecord> out;
  for (auto const& r : records) {
    if (seen.insert(text::CollapseWhitespace(r.text)).second) out.push_back(r);
  }
  return out;
}

Redactor::Redactor(std::vector<RedactionRule> rules) : rules_(std::move(rules)) {
  compiled_.reserve(rules_.size());
  for (auto const& rule : rules_) {
    try {
      compiled_.emplace_back(rule.pattern, std::regex::ECMAScript);
    } catch (std::regex_error const& e) {
      throw Error(ErrorCode::kConfig,
                  "redaction rule '" + rule.name + "': " + e.what());
    }
  }
}

Redactor Redactor::Load(std::filesystem::path const& path) {
  auto const doc = ReadJsonFile(path);
  if (!doc.is_array()) throw Error(ErrorCode::kConfig, "redaction rules: expected array");
  std::vector<RedactionRule> rules;
  for (auto const& r : doc) {
    RejectUnknownKeys(r, {"name", "pattern", "replacement"}, "redaction rule");
    try {
      rules.push_back({r.at("name").get<std::string>(), r.at("pattern").get<std::string>(),
                       r.at("replacement").get<std::string>()});
    } catch (Json::exception const& e) {
      throw Error(ErrorCode::kConfig, std::string("redaction rule: ") + e.what());
    }
  }
  return Redactor(std::move(rules));
}

Redactor const& Redactor::Default() {
  static Redactor const instance = Load(DefaultAssetDir() / "redaction_rules.json");
  return instance;
}

std::string Redactor::Apply(std::string_view text) const {
  std::string out(text);
  for (std::size_t i = 0; i < compiled_.size(); ++i) {
    out = std::regex_replace(out, compiled_[i], rules_[i].replacement);
  }
  return out;
}

UtteranceRecord Redactor::Redact(UtteranceRecord record) const {
  record.text = Apply(record.text);
  record.redacted = true;
  return record;
}

}  // namespace triage::annotation
