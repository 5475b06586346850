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

#include "triage/evaluation/records.h"

#include <array>
#include <set>
#include <utility>

#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"

namespace triage::evaluation {

namespace {

constexpr std::array<std::pair<Source, std::string_view>, 5> kSourceNames = {{
    {Source::kWeibo, "weibo"},
    {Source::kZhihu, "zhihu"},
    {Source::kYixinli, "yixinli"},
    {Source::kOpenSourceDialogue, "open_source_dialogue"},
    {Source::kPlatform, "platform"},
}};

constexpr std::string_view kUnparseable = "UNPARSEABLE";

Error ParseError(std::string const& what) {
  return Error(ErrorCode::kParse, what);
}

}  // namespace

std::string_view SourceName(Source source) {
  for (auto const& [s, name] : kSourceNames) {
    if (s == source) return name;
  }
  return "platform";
}

std::optional<Source> SourceFromName(std::string_view name) {
  for (auto const& [s, n] : kSourceNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

std::size_t UtteranceRecord::char_length() const {
  return text::Utf8Length(text);
}

Json RecordToJson(UtteranceRecord const& record) {
  Json doc = {{"id", record.id},
              {"text", record.text},
              {"source", SourceName(record.source)}};
  if (record.gold_labels) doc["labels"] = record.gold_labels->Keys();
  if (record.redacted) doc["redacted"] = true;
  return doc;
}

UtteranceRecord RecordFromJson(Json const& doc) {
  if (!doc.is_object()) throw ParseError("record must be an object");
  RejectUnknownKeys(doc, {"id", "text", "source", "labels", "redacted"}, "record");
  UtteranceRecord r;
  try {
    r.id = RequireMember(doc, "id").get<std::string>();
    r.text = RequireMember(doc, "text").get<std::string>();
    if (doc.contains("source")) {
      auto const name = doc["source"].get<std::string>();
      auto source = SourceFromName(name);
      if (!source) throw ParseError("unknown source '" + name + "'");
      r.source = *source;
    }
    if (doc.contains("labels") && !doc["labels"].is_null()) {
      r.gold_labels = LabelSet::FromKeys(doc["labels"].get<std::vector<std::string>>());
    }
    r.redacted = doc.value("redacted", false);
  } catch (Json::exception const& e) {
    throw ParseError(std::string("record: ") + e.what());
  }
  if (r.id.empty()) throw ParseError("record id is empty");
  if (r.text.empty()) throw ParseError("record '" + r.id + "' has empty text");
  return r;
}

std::vector<UtteranceRecord> ParseDataset(std::string_view contents,
                                          std::string_view source_name) {
  std::vector<UtteranceRecord> records;
  std::set<std::string, std::less<>> seen;
  for (auto const& doc : ParseJsonLines(contents, source_name)) {
    auto record = RecordFromJson(doc);
    if (!seen.insert(record.id).second) {
      throw ParseError(std::string(source_name) + ": duplicate id '" + record.id + "'");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<UtteranceRecord> LoadDataset(std::filesystem::path const& path) {
  return ParseDataset(ReadTextFile(path), path.string());
}

std::string SerializeDataset(std::span<UtteranceRecord const> records) {
  std::vector<Json> docs;
  docs.reserve(records.size());
  for (auto const& r : records) docs.push_back(RecordToJson(r));
  return DumpJsonLines(docs);
}

void SaveDataset(std::filesystem::path const& path,
                 std::span<UtteranceRecord const> records) {
  WriteTextFileAtomic(path, SerializeDataset(records));
}

Json PredictionToJson(PredictionRow const& row) {
  Json doc = {{"id", row.id}, {"round", row.round}};
  if (row.labels) {
    doc["labels"] = row.labels->Keys();
  } else {
    doc["labels"] = kUnparseable;
  }
  doc["raw"] = row.raw;
  return doc;
}

PredictionRow PredictionFromJson(Json const& doc) {
  if (!doc.is_object()) throw ParseError("prediction must be an object");
  RejectUnknownKeys(doc, {"id", "round", "labels", "raw"}, "prediction");
  PredictionRow row;
  try {
    row.id = RequireMember(doc, "id").get<std::string>();
    row.round = RequireMember(doc, "round").get<int>();
    auto const& labels = RequireMember(doc, "labels");
    if (labels.is_string()) {
      if (labels.get<std::string>() != kUnparseable) {
        throw ParseError("labels must be a list or \"UNPARSEABLE\"");
      }
    } else {
      row.labels = LabelSet::FromKeys(labels.get<std::vector<std::string>>());
    }
    row.raw = doc.value("raw", std::string());
  } catch (Json::exception const& e) {
    throw ParseError(std::string("prediction: ") + e.what());
  }
  if (row.round < 1) throw ParseError("prediction round must be >= 1");
  return row;
}

std::vector<PredictionRow> LoadPredictions(std::filesystem::path const& path) {
  std::vector<PredictionRow> rows;
  for (auto const& doc : ReadJsonLines(path)) rows.push_back(PredictionFromJson(doc));
  return rows;
}

std::string SerializePredictions(std::span<PredictionRow const> rows) {
  std::vector<Json> docs;
  docs.reserve(rows.size());
  for (auto const& r : rows) docs.push_back(PredictionToJson(r));
  return DumpJsonLines(docs);
}

std::vector<PredictionRun> GroupByRound(std::span<PredictionRow const> rows) {
  std::map<int, PredictionRun> by_round;
  for (auto const& row : rows) {
    auto& run = by_round[row.round];
    run.round_index = row.round;
    if (!run.predictions.emplace(row.id, row.labels).second) {
      throw Error(ErrorCode::kMismatchedIds,
                  "duplicate prediction for '" + row.id + "' in round " +
                      std::to_string(row.round));
    }
  }
  std::vector<PredictionRun> runs;
  for (auto& [round, run] : by_round) runs.push_back(std::move(run));
  return runs;
}

}  // namespace triage::evaluation
