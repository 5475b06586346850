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

#include "triage/common/assets.h"

#include <cstdlib>

namespace triage {

std::filesystem::path DefaultAssetDir() {
  if (char const* env = std::getenv("TRIAGE_ASSET_DIR"); env && *env) {
    return env;
  }
  std::filesystem::path const source(TRIAGE_SOURCE_ASSET_DIR);
  std::error_code ec;
  if (std::filesystem::exists(source / "taxonomy.json", ec)) return source;
  return TRIAGE_INSTALL_ASSET_DIR;
}

}  // namespace triage
