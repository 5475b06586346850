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

#ifndef TRIAGE_ANNOTATION_INGEST_H_
#define TRIAGE_ANNOTATION_INGEST_H_

#include <filesystem>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triage/evaluation/records.h"

namespace triage::annotation {

using evaluation::UtteranceRecord;

/// Drops records whose text equals an earlier record's text after whitespace
/// normalization. Keeps the first occurrence and the original order.
std::vector<UtteranceRecord> Dedup(std::span<UtteranceRecord const> records);

/// One ECMAScript pattern and its replacement ("$1" style groups allowed).
/// Patterns operate on UTF-8 bytes.
struct RedactionRule {
  std::string name;
  std::string pattern;
  std::string replacement;
};

class Redactor {
 public:
  explicit Redactor(std::vector<RedactionRule> rules);

  /// Reads redaction_rules.json: [{"name", "pattern", "replacement"}, ...].
  static Redactor Load(std::filesystem::path const& path);
  static Redactor const& Default();

  /// Applies the rules left to right.
  std::string Apply(std::string_view text) const;

  /// Returns the record with redacted text and the redacted flag set.
  UtteranceRecord Redact(UtteranceRecord record) const;

  std::vector<RedactionRule> const& rules() const { return rules_; }

 private:
  std::vector<RedactionRule> rules_;
  std::vector<std::regex> compiled_;
};

}  // namespace triage::annotation

#endif  // TRIAGE_ANNOTATION_INGEST_H_
