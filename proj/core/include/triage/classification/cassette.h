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

#ifndef TRIAGE_CLASSIFICATION_CASSETTE_H_
#define TRIAGE_CLASSIFICATION_CASSETTE_H_

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "triage/classification/backend.h"

namespace triage::classification {

struct CassetteRecord {
  std::string request_hash;
  std::string response;
  /// Sample index of the request; when absent the record's position among
  /// records with the same hash is used.
  std::optional<int> sample;
};

// A cassette is an ordered list of (request hash, response) records, one JSON
// object per line: {"request_hash": "...", "response": "...", "sample": n}.
// Records that share a hash are the successive samples of that request.
class Cassette {
 public:
  static Cassette Parse(std::string_view contents, std::string_view source);
  static Cassette Load(std::filesystem::path const& path);

  std::string Serialize() const;
  void Save(std::filesystem::path const& path) const;

  void Append(CassetteRecord record) { records_.push_back(std::move(record)); }
  std::vector<CassetteRecord> const& records() const { return records_; }

  /// The response recorded for sample `sample_index` of `request_hash`.
  std::optional<std::string> Find(std::string_view request_hash,
                                  int sample_index) const;

 private:
  std::vector<CassetteRecord> records_;
};

/// Serves responses from a cassette; a request that was never recorded is a
/// kBackendUnavailable error, never a silent default.
class ReplayBackend : public ChatBackend {
 public:
  explicit ReplayBackend(Cassette cassette, std::string id = "replay")
      : cassette_(std::move(cassette)), id_(std::move(id)) {}

  std::string id() const override { return id_; }
  std::string Complete(ChatRequest const& request) override;

 private:
  Cassette cassette_;
  std::string id_;
};

/// Forwards to another backend and records every exchange.
class RecordingBackend : public ChatBackend {
 public:
  explicit RecordingBackend(ChatBackend& inner) : inner_(inner) {}

  std::string id() const override { return inner_.id(); }
  std::string Complete(ChatRequest const& request) override;

  /// Records grouped by request hash in first-seen order, samples ascending,
  /// so the result does not depend on which concurrent call finished first.
  Cassette cassette() const;

 private:
  struct Entry {
    std::string hash;
    int sample_index;
    std::string response;
  };

  ChatBackend& inner_;
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

}  // namespace triage::classification

#endif  // TRIAGE_CLASSIFICATION_CASSETTE_H_
