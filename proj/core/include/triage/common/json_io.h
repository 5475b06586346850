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

#ifndef TRIAGE_COMMON_JSON_IO_H_
#define TRIAGE_COMMON_JSON_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace triage {

using Json = nlohmann::json;

std::string ReadTextFile(std::filesystem::path const& path);

/// Writes through a temporary sibling and renames it into place.
void WriteTextFileAtomic(std::filesystem::path const& path,
                         std::string_view contents);

Json ReadJsonFile(std::filesystem::path const& path);

/// One JSON value per non-blank line. Errors name the file and line.
std::vector<Json> ReadJsonLines(std::filesystem::path const& path);
std::vector<Json> ParseJsonLines(std::string_view contents,
                                 std::string_view source_name);

std::string DumpJsonLines(std::vector<Json> const& values);

/// Canonical single-line dump (sorted keys, UTF-8 kept as-is).
std::string CanonicalDump(Json const& value);

/// Fetches a required member, raising kConfig/kParse with the key name.
Json const& RequireMember(Json const& object, std::string_view key);

/// Rejects members not in `allowed`.
void RejectUnknownKeys(Json const& object,
                       std::vector<std::string_view> const& allowed,
                       std::string_view context);

}  // namespace triage

#endif  // TRIAGE_COMMON_JSON_IO_H_
