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

#include "triage/classification/backend.h"

#include <nlohmann/json.hpp>

#include "triage/common/hash.h"
#include "triage/common/json_io.h"

namespace triage::classification {

std::string RequestHash(ChatRequest const& request) {
  nlohmann::json const canonical = {
      {"model", request.model},
      {"system", request.system},
      {"user", request.user},
      {"temperature", request.temperature},
      {"top_p", request.top_p},
  };
  return Sha256Hex(CanonicalDump(canonical));
}

}  // namespace triage::classification
