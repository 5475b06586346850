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

#ifndef TRIAGE_EVALUATION_RECORDS_H_
#define TRIAGE_EVALUATION_RECORDS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/taxonomy/label_set.h"

namespace triage::evaluation {

enum class Source { kWeibo, kZhihu, kYixinli, kOpenSourceDialogue, kPlatform };

/// "weibo", "zhihu", "yixinli", "open_source_dialogue", "platform".
std::string_view SourceName(Source source);
std::optional<Source> SourceFromName(std::string_view name);

struct UtteranceRecord {
  std::string id;
  std::string text;
  Source source = Source::kPlatform;
  std::optional<LabelSet> gold_labels;
  bool redacted = false;

  /// Characters, not bytes.
  std::size_t char_length() const;
};

// Dataset files hold one JSON object per line:
//   {"id": "...", "text": "...", "source": "weibo", "labels": ["..."]}
// "labels" is omitted for unlabeled records; "redacted": true is written only
// when set.
nlohmann::json RecordToJson(UtteranceRecord const& record);
UtteranceRecord RecordFromJson(nlohmann::json const& doc);

/// Validates ids (unique) and texts (non-empty) across the whole file.
std::vector<UtteranceRecord> ParseDataset(std::string_view contents,
                                          std::string_view source_name);
std::vector<UtteranceRecord> LoadDataset(std::filesystem::path const& path);
std::string SerializeDataset(std::span<UtteranceRecord const> records);
void SaveDataset(std::filesystem::path const& path,
                 std::span<UtteranceRecord const> records);

/// Labels of one evaluated round, keyed by instance id.
struct PredictionRun {
  int round_index = 1;
  std::map<std::string, Prediction> predictions;
};

// Prediction files: {"id", "round", "labels": [keys] | "UNPARSEABLE", "raw"}.
// Latency is deliberately not written so replayed runs produce identical
// files.
struct PredictionRow {
  std::string id;
  int round = 1;
  Prediction labels;
  std::string raw;
};

nlohmann::json PredictionToJson(PredictionRow const& row);
PredictionRow PredictionFromJson(nlohmann::json const& doc);
std::vector<PredictionRow> LoadPredictions(std::filesystem::path const& path);
std::string SerializePredictions(std::span<PredictionRow const> rows);

/// Groups rows by round, ascending. A duplicated (id, round) pair is an error.
std::vector<PredictionRun> GroupByRound(std::span<PredictionRow const> rows);

}  // namespace triage::evaluation

#endif  // TRIAGE_EVALUATION_RECORDS_H_
