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

#include "triage/service/journal.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "triage/common/error.h"
#include "triage/common/hash.h"
#include "triage/common/json_io.h"

namespace triage::service {

namespace {

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t GetU32(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  }
  return v;
}

[[noreturn]] void ThrowErrno(std::string const& what, std::filesystem::path const& path) {
  throw Error(ErrorCode::kIo, what + " " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

std::string EncodeRecord(Event const& event) {
  auto const payload = CanonicalDump(EventToJson(event));
  if (payload.size() > kMaxRecordBytes) {
    throw Error(ErrorCode::kInvalidArgument, "journal record too large");
  }
  std::string out;
  out.reserve(kRecordHeaderBytes + payload.size());
  PutU32(out, static_cast<std::uint32_t>(payload.size()));
  PutU32(out, Crc32(payload));
  out += payload;
  return out;
}

JournalScan ScanJournal(std::string_view bytes) {
  JournalScan scan;
  std::size_t at = 0;
  while (at < bytes.size()) {
    if (bytes.size() - at < kRecordHeaderBytes) break;
    auto const len = GetU32(bytes, at);
    auto const crc = GetU32(bytes, at + 4);
    if (len > kMaxRecordBytes || bytes.size() - at - kRecordHeaderBytes < len) break;
    auto const payload = bytes.substr(at + kRecordHeaderBytes, len);
    if (Crc32(payload) != crc) break;
    Event event;
    try {
      event = EventFromJson(Json::parse(payload));
    } catch (std::exception const&) {
      break;
    }
    if (event.seq != scan.events.size() + 1) break;
    scan.events.push_back(std::move(event));
    at += kRecordHeaderBytes + len;
  }
  scan.valid_bytes = at;
  scan.truncated = at < bytes.size();
  return scan;
}

JournalScan ReadJournal(std::filesystem::path const& path) {
  if (!std::filesystem::exists(path)) return {};
  return ScanJournal(ReadTextFile(path));
}

std::unique_ptr<Journal> Journal::Open(std::filesystem::path const& path, JournalScan* scan,
                                       bool sync) {
  auto result = ReadJournal(path);
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) ThrowErrno("cannot open journal", path);
  if (::ftruncate(fd, static_cast<off_t>(result.valid_bytes)) != 0 ||
      ::lseek(fd, 0, SEEK_END) < 0) {
    ::close(fd);
    ThrowErrno("cannot position journal", path);
  }
  auto const size = result.valid_bytes;
  if (scan != nullptr) *scan = std::move(result);
  return std::unique_ptr<Journal>(new Journal(path, fd, size, sync));
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

void Journal::Append(Event const& event) {
  auto const record = EncodeRecord(event);
  std::size_t written = 0;
  while (written < record.size()) {
    auto n = ::write(fd_, record.data() + written, record.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      // Leave the file as it was so a later append does not follow garbage.
      int const saved = errno;
      if (::ftruncate(fd_, static_cast<off_t>(size_)) == 0) {
        (void)::lseek(fd_, static_cast<off_t>(size_), SEEK_SET);
      }
      errno = saved;
      ThrowErrno("journal write failed", path_);
    }
    written += static_cast<std::size_t>(n);
  }
  if (sync_ && ::fdatasync(fd_) != 0) ThrowErrno("journal sync failed", path_);
  size_ += record.size();
}

}  // namespace triage::service
