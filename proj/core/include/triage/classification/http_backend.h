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

#ifndef TRIAGE_CLASSIFICATION_HTTP_BACKEND_H_
#define TRIAGE_CLASSIFICATION_HTTP_BACKEND_H_

#include <chrono>
#include <string>

#include <nlohmann/json.hpp>

#include "triage/classification/backend.h"

namespace triage::classification {

/// Backend config file contents. The credential itself never appears in a
/// config file; only the name of the environment variable holding it.
struct HttpBackendConfig {
  std::string id = "http";
  /// Full URL of an OpenAI-compatible chat-completions endpoint.
  std::string endpoint;
  std::string credential_env;
  std::string model;
  double temperature = 1.0;
  double top_p = 1.0;
  std::chrono::milliseconds timeout{30000};
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};

  static HttpBackendConfig FromJson(nlohmann::json const& doc);
  nlohmann::json ToJson() const;
};

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path;
};

ParsedUrl ParseUrl(std::string const& url);

/// Sampling presets used when eliciting labels from the evaluated model
/// families. Unknown families fall back to temperature = top_p = 1.0.
struct SamplingPreset {
  double temperature;
  double top_p;
};
SamplingPreset SamplingPresetFor(std::string const& model_family);

/// POSTs {"model", "messages", "temperature", "top_p"} and returns
/// choices[0].message.content. Transport errors, 429 and 5xx are retried with
/// exponential backoff up to max_attempts; 4xx auth failures are not.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config);

  std::string id() const override { return config_.id; }
  std::string Complete(ChatRequest const& request) override;

  HttpBackendConfig const& config() const { return config_; }

 private:
  HttpBackendConfig config_;
  ParsedUrl url_;
};

}  // namespace triage::classification

#endif  // TRIAGE_CLASSIFICATION_HTTP_BACKEND_H_
