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

#include "triage/common/json_io.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "triage/common/error.h"
#include "triage/common/text.h"

namespace triage {

std::string ReadTextFile(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void WriteTextFileAtomic(std::filesystem::path const& path,
                         std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out.flush()) throw Error(ErrorCode::kIo, "short write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "rename failed: " + ec.message());
}

Json ReadJsonFile(std::filesystem::path const& path) {
  auto const contents = ReadTextFile(path);
  try {
    return Json::parse(contents);
  } catch (Json::parse_error const& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

std::vector<Json> ParseJsonLines(std::string_view contents,
                                 std::string_view source_name) {
  std::vector<Json> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    auto end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    ++line_no;
    auto const line = text::Trim(contents.substr(pos, end - pos));
    if (!line.empty()) {
      try {
        values.push_back(Json::parse(line));
      } catch (Json::parse_error const& e) {
        throw Error(ErrorCode::kParse, std::string(source_name) + ":" +
                                           std::to_string(line_no) + ": " +
                                           e.what());
      }
    }
    pos = end + 1;
  }
  return values;
}

std::vector<Json> ReadJsonLines(std::filesystem::path const& path) {
  return ParseJsonLines(ReadTextFile(path), path.string());
}

std::string DumpJsonLines(std::vector<Json> const& values) {
  std::string out;
  for (auto const& v : values) {
    out += CanonicalDump(v);
    out += '\n';
  }
  return out;
}

std::string CanonicalDump(Json const& value) {
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json const& RequireMember(Json const& object, std::string_view key) {
  if (!object.is_object()) {
    throw Error(ErrorCode::kParse, "expected an object holding '" +
                                       std::string(key) + "'");
  }
  auto it = object.find(key);
  if (it == object.end()) {
    throw Error(ErrorCode::kParse, "missing field '" + std::string(key) + "'");
  }
  return *it;
}

void RejectUnknownKeys(Json const& object,
                       std::vector<std::string_view> const& allowed,
                       std::string_view context) {
  if (!object.is_object()) {
    throw Error(ErrorCode::kConfig, std::string(context) + ": expected object");
  }
  for (auto const& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::kConfig,
                  std::string(context) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace triage
