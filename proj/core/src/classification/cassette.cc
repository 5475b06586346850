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

#include "triage/classification/cassette.h"

#include <algorithm>
#include <map>

#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::classification {

Cassette Cassette::Parse(std::string_view contents, std::string_view source) {
  Cassette cassette;
  for (auto const& line : ParseJsonLines(contents, source)) {
    try {
      CassetteRecord record{line.at("request_hash").get<std::string>(),
                            line.at("response").get<std::string>(),
                            std::nullopt};
      if (line.contains("sample")) record.sample = line.at("sample").get<int>();
      cassette.Append(std::move(record));
    } catch (nlohmann::json::exception const& e) {
      throw Error(ErrorCode::kParse,
                  std::string(source) + ": bad cassette record: " + e.what());
    }
  }
  return cassette;
}

Cassette Cassette::Load(std::filesystem::path const& path) {
  return Parse(ReadTextFile(path), path.string());
}

std::string Cassette::Serialize() const {
  std::vector<Json> lines;
  lines.reserve(records_.size());
  for (auto const& r : records_) {
    Json line = {{"request_hash", r.request_hash}, {"response", r.response}};
    if (r.sample) line["sample"] = *r.sample;
    lines.push_back(std::move(line));
  }
  return DumpJsonLines(lines);
}

void Cassette::Save(std::filesystem::path const& path) const {
  WriteTextFileAtomic(path, Serialize());
}

std::optional<std::string> Cassette::Find(std::string_view request_hash,
                                          int sample_index) const {
  int position = 0;
  for (auto const& r : records_) {
    if (r.request_hash != request_hash) continue;
    if (r.sample.value_or(position) == sample_index) return r.response;
    ++position;
  }
  return std::nullopt;
}

std::string ReplayBackend::Complete(ChatRequest const& request) {
  auto const hash = RequestHash(request);
  auto response = cassette_.Find(hash, request.sample_index);
  if (!response) {
    throw Error(ErrorCode::kBackendUnavailable,
                "cassette has no response for request " + hash + " sample " +
                    std::to_string(request.sample_index));
  }
  return *std::move(response);
}

std::string RecordingBackend::Complete(ChatRequest const& request) {
  auto response = inner_.Complete(request);
  std::lock_guard lock(mu_);
  entries_.push_back({RequestHash(request), request.sample_index, response});
  return response;
}

Cassette RecordingBackend::cassette() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::size_t> first_seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    first_seen.emplace(entries_[i].hash, i);
  }
  auto sorted = entries_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](Entry const& a, Entry const& b) {
                     auto const fa = first_seen.at(a.hash);
                     auto const fb = first_seen.at(b.hash);
                     if (fa != fb) return fa < fb;
                     return a.sample_index < b.sample_index;
                   });
  Cassette out;
  for (auto& e : sorted) out.Append({e.hash, e.response, e.sample_index});
  return out;
}

}  // namespace triage::classification
