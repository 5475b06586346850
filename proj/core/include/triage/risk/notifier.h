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

#ifndef TRIAGE_RISK_NOTIFIER_H_
#define TRIAGE_RISK_NOTIFIER_H_

#include <chrono>
#include <cstddef>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace triage::risk {

struct DeliveryRecord {
  bool delivered = false;
  int attempts = 0;
  int http_status = 0;
  std::string error;
};

nlohmann::json DeliveryToJson(DeliveryRecord const& record);
DeliveryRecord DeliveryFromJson(nlohmann::json const& doc);

/// Delivers counselor notifications. Delivery is at-least-once: callers may
/// repeat a notification after a crash, and receivers deduplicate on the
/// idempotency key, which is stable for a given trigger.
class Notifier {
 public:
  virtual ~Notifier() = default;
  virtual DeliveryRecord Notify(std::string const& idempotency_key,
                                nlohmann::json const& body) = 0;
};

struct WebhookConfig {
  std::string url;
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds timeout{5000};
};

/// POSTs the body as JSON with an "Idempotency-Key" header. Transport errors,
/// 408, 429 and 5xx are retried with doubling backoff; any 2xx is success and
/// other statuses fail immediately.
class WebhookNotifier : public Notifier {
 public:
  explicit WebhookNotifier(WebhookConfig config);
  DeliveryRecord Notify(std::string const& idempotency_key,
                        nlohmann::json const& body) override;

 private:
  WebhookConfig config_;
};

/// Keeps notifications in memory; used when no webhook is configured and in
/// tests. Thread-safe.
class MemoryNotifier : public Notifier {
 public:
  struct Sent {
    std::string idempotency_key;
    nlohmann::json body;
  };

  DeliveryRecord Notify(std::string const& idempotency_key,
                        nlohmann::json const& body) override;

  /// The next `n` calls fail without recording anything.
  void FailNext(int n);
  std::vector<Sent> sent() const;
  /// Number of distinct idempotency keys seen.
  std::size_t DistinctKeys() const;

 private:
  mutable std::mutex mu_;
  std::vector<Sent> sent_;
  int fail_next_ = 0;
};

}  // namespace triage::risk

#endif  // TRIAGE_RISK_NOTIFIER_H_
