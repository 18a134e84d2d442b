// Copyright 2026 The OSP Authors
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

#ifndef OSP_ERROR_HPP_
#define OSP_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace osp {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyFrame,
  kUnknownSite,
  kExcludedSite,
  kDuplicateSite,
  kGapTooLong,
  kAllMissingSite,
  kTooShort,
  kRateMismatch,
  kSiteNotPresent,
  kZeroVector,
  kLengthMismatch,
  kZeroNorm,
  kEmptyResult,
  kTieDetected,
  kMismatchedItems,
  kUniverseMismatch,
  kMalformedLine,
  kNonMonotoneTime,
  kInvalidSpec,
  kPrecondition,
  kIo,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kEmptyFrame: return "empty-frame";
    case ErrorCode::kUnknownSite: return "unknown-site";
    case ErrorCode::kExcludedSite: return "excluded-site";
    case ErrorCode::kDuplicateSite: return "duplicate-site";
    case ErrorCode::kGapTooLong: return "gap-too-long";
    case ErrorCode::kAllMissingSite: return "all-missing-site";
    case ErrorCode::kTooShort: return "too-short";
    case ErrorCode::kRateMismatch: return "rate-mismatch";
    case ErrorCode::kSiteNotPresent: return "site-not-present";
    case ErrorCode::kZeroVector: return "zero-vector";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kZeroNorm: return "zero-norm";
    case ErrorCode::kEmptyResult: return "empty-result";
    case ErrorCode::kTieDetected: return "tie-detected";
    case ErrorCode::kMismatchedItems: return "mismatched-items";
    case ErrorCode::kUniverseMismatch: return "universe-mismatch";
    case ErrorCode::kMalformedLine: return "malformed-line";
    case ErrorCode::kNonMonotoneTime: return "non-monotone-time";
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

// Errors caused by the numbers themselves rather than by malformed input map
// to exit status 2 in the CLI; everything else is an input error (status 1).
inline bool IsComputationError(ErrorCode code) {
  return code == ErrorCode::kZeroVector || code == ErrorCode::kZeroNorm ||
         code == ErrorCode::kLengthMismatch;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace osp

#endif  // OSP_ERROR_HPP_
