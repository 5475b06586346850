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

#include "triage/risk/notifier.h"

#include <set>
#include <thread>

#include <httplib.h>

#include "triage/classification/http_backend.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::risk {

namespace {

bool Retryable(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

Json DeliveryToJson(DeliveryRecord const& r) {
  return {{"delivered", r.delivered},
          {"attempts", r.attempts},
          {"http_status", r.http_status},
          {"error", r.error}};
}

DeliveryRecord DeliveryFromJson(Json const& doc) {
  DeliveryRecord r;
  r.delivered = doc.value("delivered", false);
  r.attempts = doc.value("attempts", 0);
  r.http_status = doc.value("http_status", 0);
  r.error = doc.value("error", std::string());
  return r;
}

WebhookNotifier::WebhookNotifier(WebhookConfig config) : config_(std::move(config)) {
  if (config_.max_attempts < 1) throw Error(ErrorCode::kConfig, "webhook max_attempts < 1");
  classification::ParseUrl(config_.url);  // validates early
}

DeliveryRecord WebhookNotifier::Notify(std::string const& idempotency_key, Json const& body) {
  auto const url = classification::ParseUrl(config_.url);
  httplib::Client client(url.scheme + "://" + url.host + ":" + std::to_string(url.port));
  auto const secs = config_.timeout.count() / 1000;
  auto const usecs = (config_.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers const headers = {{"Idempotency-Key", idempotency_key}};
  auto const payload = CanonicalDump(body);

  DeliveryRecord record;
  auto backoff = config_.initial_backoff;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    record.attempts = attempt;
    auto res = client.Post(url.path, headers, payload, "application/json");
    if (res) {
      record.http_status = res->status;
      if (res->status >= 200 && res->status < 300) {
        record.delivered = true;
        record.error.clear();
        return record;
      }
      record.error = "HTTP " + std::to_string(res->status);
      if (!Retryable(res->status)) return record;
    } else {
      record.http_status = 0;
      record.error = httplib::to_string(res.error());
    }
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  return record;
}

DeliveryRecord MemoryNotifier::Notify(std::string const& idempotency_key, Json const& body) {
  std::lock_guard lock(mu_);
  if (fail_next_ > 0) {
    --fail_next_;
    return {false, 1, 503, "injected failure"};
  }
  sent_.push_back({idempotency_key, body});
  return {true, 1, 200, ""};
}

void MemoryNotifier::FailNext(int n) {
  std::lock_guard lock(mu_);
  fail_next_ = n;
}

std::vector<MemoryNotifier::Sent> MemoryNotifier::sent() const {
  std::lock_guard lock(mu_);
  return sent_;
}

std::size_t MemoryNotifier::DistinctKeys() const {
  std::lock_guard lock(mu_);
  std::set<std::string> keys;
  for (auto const& s : sent_) keys.insert(s.idempotency_key);
  return keys.size();
}

}  // namespace triage::risk
