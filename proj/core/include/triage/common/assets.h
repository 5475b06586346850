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

#ifndef TRIAGE_COMMON_ASSETS_H_
#define TRIAGE_COMMON_ASSETS_H_

#include <filesystem>

namespace triage {

/// Directory holding the shipped config assets (taxonomy, prompts, rule
/// tables, screening bank). Resolution order: $TRIAGE_ASSET_DIR, the source
/// tree's assets/ (for in-tree builds), the installed share/triage.
std::filesystem::path DefaultAssetDir();

}  // namespace triage

#endif  // TRIAGE_COMMON_ASSETS_H_
