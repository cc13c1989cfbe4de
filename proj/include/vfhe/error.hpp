// Copyright 2026 The vFHE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VFHE_ERROR_HPP_
#define VFHE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vfhe {

enum class ErrorCode {
  kInvalidParams,
  kParamMismatch,
  kFormMismatch,
  kOutOfRange,
  kLevelMismatch,
  kNoLevelsLeft,
  kDegreeMismatch,
  kMissingKey,
  kNoiseHeadroom,
  kFieldOverflow,
  kDataflow,
  kTraceMismatch,
  kSizeMismatch,
  kBudgetExceeded,
  kMalformed,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "invalid-params";
    case ErrorCode::kParamMismatch: return "param-mismatch";
    case ErrorCode::kFormMismatch: return "form-mismatch";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kLevelMismatch: return "level-mismatch";
    case ErrorCode::kNoLevelsLeft: return "no-levels-left";
    case ErrorCode::kDegreeMismatch: return "degree-mismatch";
    case ErrorCode::kMissingKey: return "missing-key";
    case ErrorCode::kNoiseHeadroom: return "noise-headroom";
    case ErrorCode::kFieldOverflow: return "field-overflow";
    case ErrorCode::kDataflow: return "dataflow";
    case ErrorCode::kTraceMismatch: return "trace-mismatch";
    case ErrorCode::kSizeMismatch: return "size-mismatch";
    case ErrorCode::kBudgetExceeded: return "budget-exceeded";
    case ErrorCode::kMalformed: return "malformed";
  }
  return "unknown";
}

}  // namespace vfhe

#endif  // VFHE_ERROR_HPP_
