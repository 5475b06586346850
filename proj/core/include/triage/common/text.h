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

#ifndef TRIAGE_COMMON_TEXT_H_
#define TRIAGE_COMMON_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace triage::text {

/// Decodes the code point starting at `pos` and advances `pos` past it.
/// Malformed sequences decode as U+FFFD and consume a single byte.
char32_t NextCodePoint(std::string_view s, std::size_t& pos);

void AppendUtf8(std::string& out, char32_t cp);

/// Number of code points (a Chinese character counts as one).
std::size_t Utf8Length(std::string_view s);

bool IsSpace(char32_t cp);
/// ASCII punctuation plus the CJK/full-width marks common in model output.
bool IsPunctuation(char32_t cp);

std::string Trim(std::string_view s);
/// Trims whitespace and punctuation from both ends.
std::string TrimPunctuation(std::string_view s);
/// Trims, then replaces each internal whitespace run by a single ' '.
std::string CollapseWhitespace(std::string_view s);
std::string AsciiLower(std::string_view s);

/// Splits on any of the (possibly multi-byte) delimiters. Empty pieces are
/// kept so callers can decide how to treat them.
std::vector<std::string> SplitAny(std::string_view s,
                                  std::vector<std::string> const& delimiters);

std::string ReplaceAll(std::string_view s, std::string_view from,
                       std::string_view to);

std::string Join(std::vector<std::string> const& parts, std::string_view sep);

}  // namespace triage::text

#endif  // TRIAGE_COMMON_TEXT_H_
