// Copyright 2026 The wavtok Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavtok {

enum class ErrorCode {
  kEmptyInput,
  kTooShort,
  kConfig,
  kShape,
  kDivisionGuard,
  kInsufficientInitData,
  kInvalidArgument,
  kTrainingFault,
  kBadMagic,
  kVersionMismatch,
  kTruncated,
  kIndexOutOfRange,
  kCorrupt,
  kCompatibility,
  kIo,
};

inline std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "empty input";
    case ErrorCode::kTooShort: return "input too short";
    case ErrorCode::kConfig: return "configuration error";
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kDivisionGuard: return "division guard";
    case ErrorCode::kInsufficientInitData: return "insufficient init data";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kTrainingFault: return "training fault";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
    case ErrorCode::kCorrupt: return "corrupt file";
    case ErrorCode::kCompatibility: return "compatibility error";
    case ErrorCode::kIo: return "io error";
  }
  return "unknown";
}

inline void check(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace wavtok
