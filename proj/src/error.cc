// Copyright 2026 The FedShield Authors
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

#include "fedshield/error.h"

namespace fedshield {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroNorm:
      return "ZeroNorm";
    case ErrorCode::kDimMismatch:
      return "DimMismatch";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kInvalidSpec:
      return "InvalidSpec";
    case ErrorCode::kInvalidAlpha:
      return "InvalidAlpha";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kNonNumericFeature:
      return "NonNumericFeature";
    case ErrorCode::kMissingLabelColumn:
      return "MissingLabelColumn";
    case ErrorCode::kEmptyRound:
      return "EmptyRound";
    case ErrorCode::kTooFewClients:
      return "TooFewClients";
    case ErrorCode::kOverTrimmed:
      return "OverTrimmed";
    case ErrorCode::kSourceClassAbsent:
      return "SourceClassAbsent";
    case ErrorCode::kConfigInvalid:
      return "ConfigInvalid";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kRoundFailed:
      return "RoundFailed";
  }
  return "Unknown";
}

}  // namespace fedshield
