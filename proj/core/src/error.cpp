// Copyright 2026 The beaconclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beaconclust/error.hpp"

namespace beaconclust {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kEmptyHistory: return "EmptyHistory";
    case ErrorCode::kNoKnownBeacons: return "NoKnownBeacons";
    case ErrorCode::kFilterTooAggressive: return "FilterTooAggressive";
    case ErrorCode::kInitInfeasible: return "InitInfeasible";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kUserSetMismatch: return "UserSetMismatch";
    case ErrorCode::kUnseenUser: return "UnseenUser";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace beaconclust
