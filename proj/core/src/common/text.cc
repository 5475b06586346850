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

#include "triage/common/text.h"

#include <algorithm>

namespace triage::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool InRange(char32_t cp, char32_t lo, char32_t hi) {
  return cp >= lo && cp <= hi;
}

// Byte offsets [begin, end) of the code points kept after stripping every
// leading and trailing code point for which `strip` is true.
template <typename Pred>
std::string StripEnds(std::string_view s, Pred strip) {
  std::size_t pos = 0;
  std::size_t begin = s.size();
  std::size_t end = 0;
  while (pos < s.size()) {
    std::size_t const start = pos;
    char32_t const cp = NextCodePoint(s, pos);
    if (!strip(cp)) {
      begin = std::min(begin, start);
      end = pos;
    }
  }
  if (begin >= end) return {};
  return std::string(s.substr(begin, end - begin));
}

}  // namespace

char32_t NextCodePoint(std::string_view s, std::size_t& pos) {
  auto const b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + len > s.size()) {
    ++pos;
    return kReplacement;
  }
  for (int i = 1; i < len; ++i) {
    auto const b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

void AppendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::size_t Utf8Length(std::string_view s) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    NextCodePoint(s, pos);
    ++n;
  }
  return n;
}

bool IsSpace(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' ||
         cp == '\f' || cp == 0x00A0 || cp == 0x3000 || cp == 0xFEFF;
}

bool IsPunctuation(char32_t cp) {
  if (cp < 0x80) {
    return InRange(cp, 0x21, 0x2F) || InRange(cp, 0x3A, 0x40) ||
           InRange(cp, 0x5B, 0x60) || InRange(cp, 0x7B, 0x7E);
  }
  return cp == 0x00B7 || InRange(cp, 0x2010, 0x2027) ||
         InRange(cp, 0x3001, 0x3003) || InRange(cp, 0x3008, 0x3011) ||
         InRange(cp, 0x3014, 0x301F) || InRange(cp, 0xFF01, 0xFF0F) ||
         InRange(cp, 0xFF1A, 0xFF20) || InRange(cp, 0xFF3B, 0xFF40) ||
         InRange(cp, 0xFF5B, 0xFF65);
}

std::string Trim(std::string_view s) {
  return StripEnds(s, [](char32_t cp) { return IsSpace(cp); });
}

std::string TrimPunctuation(std::string_view s) {
  return StripEnds(
      s, [](char32_t cp) { return IsSpace(cp) || IsPunctuation(cp); });
}

std::string CollapseWhitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t const start = pos;
    char32_t const cp = NextCodePoint(s, pos);
    if (IsSpace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(s.substr(start, pos - start));
  }
  return out;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> SplitAny(std::string_view s,
                                  std::vector<std::string> const& delimiters) {
  std::vector<std::string> pieces;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t matched = 0;
    for (auto const& d : delimiters) {
      if (!d.empty() && s.substr(pos, d.size()) == d) {
        matched = std::max(matched, d.size());
      }
    }
    if (matched > 0) {
      pieces.emplace_back(s.substr(start, pos - start));
      pos += matched;
      start = pos;
    } else {
      ++pos;
    }
  }
  pieces.emplace_back(s.substr(start));
  return pieces;
}

std::string ReplaceAll(std::string_view s, std::string_view from,
                       std::string_view to) {
  if (from.empty()) return std::string(s);
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto const hit = s.find(from, pos);
    if (hit == std::string_view::npos) break;
    out.append(s.substr(pos, hit - pos));
    out.append(to);
    pos = hit + from.size();
  }
  out.append(s.substr(pos));
  return out;
}

std::string Join(std::vector<std::string> const& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace triage::text
