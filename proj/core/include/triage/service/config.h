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

#ifndef TRIAGE_SERVICE_CONFIG_H_
#define TRIAGE_SERVICE_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "triage/classification/backend.h"
#include "triage/classification/http_backend.h"
#include "triage/classification/prompt.h"
#include "triage/risk/notifier.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::service {

enum class BackendKind { kRule, kHttp, kCassette };

struct BackendConfig {
  BackendKind kind = BackendKind::kRule;
  classification::HttpBackendConfig http;  // kind == kHttp
  std::filesystem::path cassette_path;     // kind == kCassette
};

/// Service configuration file. Unknown keys are rejected so typos fail
/// loudly instead of silently falling back to defaults.
struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  BackendConfig backend;
  classification::PromptKind prompt_kind = classification::PromptKind::kZeroShot;
  taxonomy::Language language = taxonomy::Language::kZh;
  /// Empty means DefaultAssetDir().
  std::filesystem::path asset_dir;
  /// Empty means <asset_dir>/taxonomy.json.
  std::filesystem::path taxonomy_path;
  /// Gate threshold for batches that do not set their own; absent means the
  /// phase preset.
  std::optional<double> gate_threshold;
  /// Empty keeps notifications in memory (tests, dry runs).
  std::string webhook_url;
  int webhook_max_attempts = 5;
  int webhook_initial_backoff_ms = 200;
  int webhook_timeout_ms = 5000;
  std::filesystem::path data_dir = "triage-data";
  /// Limit in code points.
  std::size_t max_message_chars = 500;
  /// Bearer token required on every /v1 route except health; empty disables.
  std::string api_token;
  /// Write a state snapshot every N events; 0 disables.
  std::size_t snapshot_every = 100;
  bool journal_sync = true;
  std::string hotline_number = "400-161-9995";
  bool notify_on_aggression_against_users = true;
  int assess_max_attempts = 3;
  /// Worker threads for the HTTP server.
  std::size_t http_threads = 8;

  static ServiceConfig FromJson(nlohmann::json const& doc);
  static ServiceConfig Load(std::filesystem::path const& path);
  nlohmann::json ToJson() const;

  std::filesystem::path ResolvedAssetDir() const;
  std::filesystem::path ResolvedTaxonomyPath() const;
};

std::unique_ptr<classification::ChatBackend> MakeBackend(BackendConfig const& config,
                                                         taxonomy::Taxonomy const& taxonomy,
                                                         std::filesystem::path const& asset_dir);

/// WebhookNotifier when a URL is configured, MemoryNotifier otherwise.
std::unique_ptr<risk::Notifier> MakeNotifier(ServiceConfig const& config);

}  // namespace triage::service

#endif  // TRIAGE_SERVICE_CONFIG_H_
