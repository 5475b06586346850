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

#ifndef TRIAGE_CLASSIFICATION_BACKEND_H_
#define TRIAGE_CLASSIFICATION_BACKEND_H_

#include <map>
#include <string>

namespace triage::classification {

/// What the caller wants from the model. Network backends ignore it; it lets
/// the offline rule backend answer each kind of request deterministically.
enum class Task { kClassify, kCounselorTurn, kAssess };

/// One chat-completion request: a system text and a user text in, one
/// assistant text out.
struct ChatRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = 1.0;
  double top_p = 1.0;

  Task task = Task::kClassify;
  /// Which independent sample of an identical request this is (0-based).
  /// Replay backends use it to pick the n-th recorded response for the same
  /// request hash, which keeps replays independent of completion order.
  int sample_index = 0;
  /// Structured side information for offline backends; never sent on the
  /// wire and excluded from the request hash.
  std::map<std::string, std::string> hints;
};

/// Stable SHA-256 over the wire-visible fields (model, system, user,
/// temperature, top_p).
std::string RequestHash(ChatRequest const& request);

/// A stateless request/response chat client. Implementations throw
/// Error(kBackendUnavailable) when no answer can be produced.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  virtual std::string id() const = 0;
  virtual std::string Complete(ChatRequest const& request) = 0;
};

}  // namespace triage::classification

#endif  // TRIAGE_CLASSIFICATION_BACKEND_H_
