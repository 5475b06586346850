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

#ifndef TRIAGE_SERVICE_JOURNAL_H_
#define TRIAGE_SERVICE_JOURNAL_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "triage/service/event.h"

namespace triage::service {

// Record framing: u32 little-endian payload length, u32 little-endian CRC-32
// of the payload, then the payload (canonical JSON of one Event).
inline constexpr std::size_t kRecordHeaderBytes = 8;
inline constexpr std::uint32_t kMaxRecordBytes = 64u << 20;

std::string EncodeRecord(Event const& event);

struct JournalScan {
  std::vector<Event> events;
  /// Length of the well-formed prefix.
  std::uint64_t valid_bytes = 0;
  /// True when bytes past `valid_bytes` were ignored: a torn final write or
  /// a corrupt record. Everything after the first bad record is dropped.
  bool truncated = false;
};

/// Decodes records until the end or the first bad one. Sequence numbers must
/// run 1, 2, 3, ...; a gap counts as corruption.
JournalScan ScanJournal(std::string_view bytes);
JournalScan ReadJournal(std::filesystem::path const& path);

/// Append-only event log. Not synchronized; the owner serializes appends.
class Journal {
 public:
  /// Scans `path` (a missing file is an empty journal), cuts any bad tail off
  /// the file, and opens it for appending. The scan is returned via `scan`.
  static std::unique_ptr<Journal> Open(std::filesystem::path const& path,
                                       JournalScan* scan, bool sync = true);
  ~Journal();
  Journal(Journal const&) = delete;
  Journal& operator=(Journal const&) = delete;

  /// Writes one record with a single write(2), then fdatasync when `sync`.
  void Append(Event const& event);

  std::filesystem::path const& path() const { return path_; }
  std::uint64_t size_bytes() const { return size_; }

 private:
  Journal(std::filesystem::path path, int fd, std::uint64_t size, bool sync)
      : path_(std::move(path)), fd_(fd), size_(size), sync_(sync) {}

  std::filesystem::path path_;
  int fd_;
  std::uint64_t size_;
  bool sync_;
};

}  // namespace triage::service

#endif  // TRIAGE_SERVICE_JOURNAL_H_
