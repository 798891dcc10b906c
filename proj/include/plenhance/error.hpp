// Copyright 2026 The plenhance Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plenhance {

/// Error classes raised by the engine. The CLI maps every one of them to
/// exit status 1; the names are stable and appear in diagnostics.
enum class ErrorCode {
  kDimensionMismatch,
  kNonFinite,
  kBadLabel,
  kBadMagic,
  kBadVersion,
  kTruncatedFile,
  kRleSumMismatch,
  kAreaMismatch,
  kDuplicateId,
  kBadShape,
  kUnknownField,
  kOutOfRange,
  kEmptySet,
  kZeroDenominator,
  kZeroBaseline,
  kInfeasibleSpec,
  kIo,
  kParse,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error-class prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace plenhance
