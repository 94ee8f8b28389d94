/*
 * Copyright 2026 The NCS Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NCS_ERROR_HPP_
#define NCS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncs {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kMalformedHeader,
  kMalformedValue,
  kDimensionMismatch,
  kNonFiniteValue,
  kNonBinaryConceptValue,
  kLengthMismatch,
  kSingleClassInput,
  kSingleClassLabels,
  kDegenerateRate,
  kEmptyMask,
  kEmptyInput,
  kEmptyFront,
  kIndexOutOfRange,
  kNonPositiveProbability,
  kTooFewPositives,
  kNumericFailure,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kMalformedValue: return "MalformedValue";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kNonBinaryConceptValue: return "NonBinaryConceptValue";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kSingleClassInput: return "SingleClassInput";
    case ErrorCode::kSingleClassLabels: return "SingleClassLabels";
    case ErrorCode::kDegenerateRate: return "DegenerateRate";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyFront: return "EmptyFront";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNonPositiveProbability: return "NonPositiveProbability";
    case ErrorCode::kTooFewPositives: return "TooFewPositives";
    case ErrorCode::kNumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

// Thrown by every library operation; `code()` is stable and machine-readable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace ncs

#endif  // NCS_ERROR_HPP_
