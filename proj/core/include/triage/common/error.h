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

#ifndef TRIAGE_COMMON_ERROR_H_
#define TRIAGE_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace triage {

/// Failure categories shared by every module. The CLI prints the name of the
/// code in its machine-readable error line and the HTTP layer maps codes to
/// status codes, so renaming an enumerator is a wire-format change.
enum class ErrorCode {
  kInvalidArgument,
  kInvalidLabelSet,
  kConfig,
  kIo,
  kParse,
  kBackendUnavailable,
  kMismatchedIds,
  kUnlabeledRecord,
  kUnevenRaters,
  kDegenerateMarginals,
  kWrongVoteCount,
  kWrongState,
  kNotFound,
  kNoRemainingQuestions,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string const& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace triage

#endif  // TRIAGE_COMMON_ERROR_H_
