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

#include "triage/common/error.h"

namespace triage {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kInvalidLabelSet: return "INVALID_LABEL_SET";
    case ErrorCode::kConfig: return "CONFIG";
    case ErrorCode::kIo: return "IO";
    case ErrorCode::kParse: return "PARSE";
    case ErrorCode::kBackendUnavailable: return "BACKEND_UNAVAILABLE";
    case ErrorCode::kMismatchedIds: return "MISMATCHED_IDS";
    case ErrorCode::kUnlabeledRecord: return "UNLABELED_RECORD";
    case ErrorCode::kUnevenRaters: return "UNEVEN_RATERS";
    case ErrorCode::kDegenerateMarginals: return "DEGENERATE_MARGINALS";
    case ErrorCode::kWrongVoteCount: return "WRONG_VOTE_COUNT";
    case ErrorCode::kWrongState: return "WRONG_STATE";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kNoRemainingQuestions: return "NO_REMAINING_QUESTIONS";
  }
  return "UNKNOWN";
}

}  // namespace triage
