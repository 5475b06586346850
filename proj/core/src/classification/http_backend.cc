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

#include "triage/classification/http_backend.h"

#include <httplib.h>

#include <cstdlib>
#include <thread>

#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/common/text.h"

namespace triage::classification {

namespace {

Error Unavailable(std::string const& what) {
  return Error(ErrorCode::kBackendUnavailable, what);
}

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpBackendConfig HttpBackendConfig::FromJson(nlohmann::json const& doc) {
  RejectUnknownKeys(doc,
                    {"id", "endpoint", "credential_env", "model", "temperature",
                     "top_p", "timeout_ms", "max_attempts",
                     "initial_backoff_ms"},
                    "backend");
  HttpBackendConfig c;
  try {
    c.id = doc.value("id", std::string("http"));
    c.endpoint = doc.at("endpoint").get<std::string>();
    c.credential_env = doc.value("credential_env", std::string{});
    c.model = doc.at("model").get<std::string>();
    c.temperature = doc.value("temperature", 1.0);
    c.top_p = doc.value("top_p", 1.0);
    c.timeout = std::chrono::milliseconds(doc.value("timeout_ms", 30000));
    c.max_attempts = doc.value("max_attempts", 3);
    c.initial_backoff =
        std::chrono::milliseconds(doc.value("initial_backoff_ms", 500));
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kConfig, std::string("backend: ") + e.what());
  }
  if (c.temperature < 0) throw Error(ErrorCode::kConfig, "backend: temperature < 0");
  if (c.top_p <= 0 || c.top_p > 1) {
    throw Error(ErrorCode::kConfig, "backend: top_p must be in (0, 1]");
  }
  if (c.max_attempts < 1) throw Error(ErrorCode::kConfig, "backend: max_attempts < 1");
  return c;
}

nlohmann::json HttpBackendConfig::ToJson() const {
  return {{"id", id},
          {"endpoint", endpoint},
          {"credential_env", credential_env},
          {"model", model},
          {"temperature", temperature},
          {"top_p", top_p},
          {"timeout_ms", timeout.count()},
          {"max_attempts", max_attempts},
          {"initial_backoff_ms", initial_backoff.count()}};
}

ParsedUrl ParseUrl(std::string const& url) {
  ParsedUrl out;
  auto const scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfig, "url without scheme: " + url);
  }
  out.scheme = text::AsciiLower(url.substr(0, scheme_end));
  if (out.scheme != "http" && out.scheme != "https") {
    throw Error(ErrorCode::kConfig, "unsupported url scheme: " + url);
  }
  auto const rest = url.substr(scheme_end + 3);
  auto const slash = rest.find('/');
  auto const authority = rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  auto const colon = authority.rfind(':');
  if (colon != std::string::npos) {
    out.host = authority.substr(0, colon);
    try {
      out.port = std::stoi(authority.substr(colon + 1));
    } catch (std::exception const&) {
      throw Error(ErrorCode::kConfig, "bad port in url: " + url);
    }
  } else {
    out.host = authority;
    out.port = out.scheme == "https" ? 443 : 80;
  }
  if (out.host.empty()) throw Error(ErrorCode::kConfig, "url without host: " + url);
  return out;
}

SamplingPreset SamplingPresetFor(std::string const& model_family) {
  auto const family = text::AsciiLower(model_family);
  if (family.rfind("chatglm", 0) == 0) return {0.8, 0.8};
  if (family.rfind("qwen", 0) == 0) return {0.7, 0.8};
  return {1.0, 1.0};
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config)
    : config_(std::move(config)), url_(ParseUrl(config_.endpoint)) {}

std::string HttpChatBackend::Complete(ChatRequest const& request) {
  nlohmann::json messages = nlohmann::json::array();
  if (!request.system.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user}});
  nlohmann::json const body = {
      {"model", request.model.empty() ? config_.model : request.model},
      {"messages", messages},
      {"temperature", request.temperature},
      {"top_p", request.top_p}};

  httplib::Headers headers;
  if (!config_.credential_env.empty()) {
    char const* token = std::getenv(config_.credential_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw Unavailable("credential variable " + config_.credential_env +
                        " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  httplib::Client client(url_.scheme + "://" + url_.host + ":" +
                         std::to_string(url_.port));
  auto const secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  auto const usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  auto backoff = config_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    auto res = client.Post(url_.path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      try {
        auto const reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content")
            .get<std::string>();
      } catch (nlohmann::json::exception const& e) {
        throw Unavailable(std::string("malformed completion response: ") +
                          e.what());
      }
    } else if (!Retryable(res->status)) {
      throw Unavailable("endpoint returned HTTP " + std::to_string(res->status));
    } else {
      last_error = "endpoint returned HTTP " + std::to_string(res->status);
    }
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw Unavailable(last_error + " after " + std::to_string(config_.max_attempts) +
                    " attempts");
}

}  // namespace triage::classification
