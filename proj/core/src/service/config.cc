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

#include "triage/service/config.h"

#include "triage/classification/cassette.h"
#include "triage/classification/rule_baseline.h"
#include "triage/common/assets.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::service {

namespace {

Error Bad(std::string const& what) { return Error(ErrorCode::kConfig, "config: " + what); }

std::string_view BackendKindName(BackendKind kind) {
  switch (kind) {
    case BackendKind::kRule: return "rule";
    case BackendKind::kHttp: return "http";
    case BackendKind::kCassette: return "cassette";
  }
  return "rule";
}

BackendConfig BackendFromJson(Json doc) {
  if (!doc.is_object()) throw Bad("backend must be an object");
  BackendConfig b;
  auto const kind = doc.value("kind", std::string("rule"));
  doc.erase("kind");
  if (kind == "rule") {
    RejectUnknownKeys(doc, {}, "backend");
    b.kind = BackendKind::kRule;
  } else if (kind == "cassette") {
    RejectUnknownKeys(doc, {"path"}, "backend");
    b.kind = BackendKind::kCassette;
    if (!doc.contains("path")) throw Bad("cassette backend needs 'path'");
    b.cassette_path = doc["path"].get<std::string>();
  } else if (kind == "http") {
    b.kind = BackendKind::kHttp;
    b.http = classification::HttpBackendConfig::FromJson(doc);
  } else {
    throw Bad("unknown backend kind '" + kind + "'");
  }
  return b;
}

}  // namespace

ServiceConfig ServiceConfig::FromJson(Json const& doc) {
  if (!doc.is_object()) throw Bad("top level must be an object");
  RejectUnknownKeys(doc,
                    {"bind_address", "port", "backend", "prompt", "language", "asset_dir",
                     "taxonomy_path", "gate_threshold", "webhook_url", "webhook_max_attempts",
                     "webhook_initial_backoff_ms", "webhook_timeout_ms", "data_dir",
                     "max_message_chars", "api_token", "snapshot_every", "journal_sync",
                     "hotline_number", "notify_on_aggression_against_users",
                     "assess_max_attempts", "http_threads"},
                    "config");
  ServiceConfig c;
  try {
    c.bind_address = doc.value("bind_address", c.bind_address);
    c.port = doc.value("port", c.port);
    if (doc.contains("backend")) c.backend = BackendFromJson(doc["backend"]);
    auto const prompt = doc.value("prompt", std::string("zero_shot"));
    if (prompt == "zero_shot") {
      c.prompt_kind = classification::PromptKind::kZeroShot;
    } else if (prompt == "few_shot") {
      c.prompt_kind = classification::PromptKind::kFewShot;
    } else {
      throw Bad("prompt must be zero_shot or few_shot");
    }
    auto const lang = doc.value("language", std::string("zh"));
    if (lang == "zh") {
      c.language = taxonomy::Language::kZh;
    } else if (lang == "en") {
      c.language = taxonomy::Language::kEn;
    } else {
      throw Bad("language must be zh or en");
    }
    c.asset_dir = doc.value("asset_dir", std::string());
    c.taxonomy_path = doc.value("taxonomy_path", std::string());
    if (doc.contains("gate_threshold")) c.gate_threshold = doc["gate_threshold"].get<double>();
    c.webhook_url = doc.value("webhook_url", std::string());
    c.webhook_max_attempts = doc.value("webhook_max_attempts", c.webhook_max_attempts);
    c.webhook_initial_backoff_ms =
        doc.value("webhook_initial_backoff_ms", c.webhook_initial_backoff_ms);
    c.webhook_timeout_ms = doc.value("webhook_timeout_ms", c.webhook_timeout_ms);
    c.data_dir = doc.value("data_dir", c.data_dir.string());
    c.max_message_chars = doc.value("max_message_chars", c.max_message_chars);
    c.api_token = doc.value("api_token", std::string());
    c.snapshot_every = doc.value("snapshot_every", c.snapshot_every);
    c.journal_sync = doc.value("journal_sync", c.journal_sync);
    c.hotline_number = doc.value("hotline_number", c.hotline_number);
    c.notify_on_aggression_against_users =
        doc.value("notify_on_aggression_against_users", c.notify_on_aggression_against_users);
    c.assess_max_attempts = doc.value("assess_max_attempts", c.assess_max_attempts);
    c.http_threads = doc.value("http_threads", c.http_threads);
  } catch (Json::exception const& e) {
    throw Bad(e.what());
  }
  if (c.port < 0 || c.port > 65535) throw Bad("port out of range");
  if (c.max_message_chars == 0) throw Bad("max_message_chars must be positive");
  if (c.gate_threshold && !(*c.gate_threshold >= -1 && *c.gate_threshold <= 1)) {
    throw Bad("gate_threshold must lie in [-1, 1]");
  }
  if (c.webhook_max_attempts < 1) throw Bad("webhook_max_attempts < 1");
  if (c.assess_max_attempts < 1) throw Bad("assess_max_attempts < 1");
  if (c.http_threads == 0) throw Bad("http_threads must be positive");
  if (c.data_dir.empty()) throw Bad("data_dir must not be empty");
  if (c.hotline_number.empty()) throw Bad("hotline_number must not be empty");
  return c;
}

ServiceConfig ServiceConfig::Load(std::filesystem::path const& path) {
  return FromJson(ReadJsonFile(path));
}

Json ServiceConfig::ToJson() const {
  Json backend_doc;
  switch (backend.kind) {
    case BackendKind::kRule:
      backend_doc = Json::object();
      break;
    case BackendKind::kCassette:
      backend_doc = {{"path", backend.cassette_path.string()}};
      break;
    case BackendKind::kHttp:
      backend_doc = backend.http.ToJson();
      break;
  }
  backend_doc["kind"] = BackendKindName(backend.kind);
  Json doc = {{"bind_address", bind_address},
              {"port", port},
              {"backend", std::move(backend_doc)},
              {"prompt", classification::PromptKindName(prompt_kind)},
              {"language", language == taxonomy::Language::kZh ? "zh" : "en"},
              {"asset_dir", asset_dir.string()},
              {"taxonomy_path", taxonomy_path.string()},
              {"webhook_url", webhook_url},
              {"webhook_max_attempts", webhook_max_attempts},
              {"webhook_initial_backoff_ms", webhook_initial_backoff_ms},
              {"webhook_timeout_ms", webhook_timeout_ms},
              {"data_dir", data_dir.string()},
              {"max_message_chars", max_message_chars},
              {"api_token", api_token},
              {"snapshot_every", snapshot_every},
              {"journal_sync", journal_sync},
              {"hotline_number", hotline_number},
              {"notify_on_aggression_against_users", notify_on_aggression_against_users},
              {"assess_max_attempts", assess_max_attempts},
              {"http_threads", http_threads}};
  if (gate_threshold) doc["gate_threshold"] = *gate_threshold;
  return doc;
}

std::filesystem::path ServiceConfig::ResolvedAssetDir() const {
  return asset_dir.empty() ? DefaultAssetDir() : asset_dir;
}

std::filesystem::path ServiceConfig::ResolvedTaxonomyPath() const {
  return taxonomy_path.empty() ? ResolvedAssetDir() / "taxonomy.json" : taxonomy_path;
}

std::unique_ptr<classification::ChatBackend> MakeBackend(BackendConfig const& config,
                                                         taxonomy::Taxonomy const& taxonomy,
                                                         std::filesystem::path const& asset_dir) {
  switch (config.kind) {
    case BackendKind::kRule:
      return std::make_unique<classification::RuleBackend>(
          classification::RuleTable::Load(asset_dir / "rule_patterns.json"), taxonomy);
    case BackendKind::kCassette:
      return std::make_unique<classification::ReplayBackend>(
          classification::Cassette::Load(config.cassette_path));
    case BackendKind::kHttp:
      return std::make_unique<classification::HttpChatBackend>(config.http);
  }
  throw Bad("unknown backend kind");
}

std::unique_ptr<risk::Notifier> MakeNotifier(ServiceConfig const& config) {
  if (config.webhook_url.empty()) return std::make_unique<risk::MemoryNotifier>();
  risk::WebhookConfig w;
  w.url = config.webhook_url;
  w.max_attempts = config.webhook_max_attempts;
  w.initial_backoff = std::chrono::milliseconds(config.webhook_initial_backoff_ms);
  w.timeout = std::chrono::milliseconds(config.webhook_timeout_ms);
  return std::make_unique<risk::WebhookNotifier>(w);
}

}  // namespace triage::service
