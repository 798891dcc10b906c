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

#include "plenhance/error.hpp"

namespace plenhance {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadVersion: return "BadVersion";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kRleSumMismatch: return "RleSumMismatch";
    case ErrorCode::kAreaMismatch: return "AreaMismatch";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kUnknownField: return "UnknownField";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kInfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace plenhance
