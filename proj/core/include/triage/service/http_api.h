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

#ifndef TRIAGE_SERVICE_HTTP_API_H_
#define TRIAGE_SERVICE_HTTP_API_H_

#include <memory>
#include <string>

#include "triage/common/error.h"
#include "triage/service/service.h"

namespace triage::service {

int HttpStatusFor(ErrorCode code);

/// The /v1 JSON API. Errors are {"error": {"code", "message"}} with the
/// status from HttpStatusFor.
class HttpApi {
 public:
  explicit HttpApi(TriageService& service);
  ~HttpApi();
  HttpApi(HttpApi const&) = delete;
  HttpApi& operator=(HttpApi const&) = delete;

  /// Binds without serving yet. Port 0 picks a free port; returns the port.
  int Bind(std::string const& host, int port);
  /// Serves until Stop(). Call after Bind.
  void Serve();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace triage::service

#endif  // TRIAGE_SERVICE_HTTP_API_H_
