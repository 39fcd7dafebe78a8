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

#ifndef FEDSHIELD_ERROR_H_
#define FEDSHIELD_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace fedshield {

enum class ErrorCode {
  kZeroNorm,
  kDimMismatch,
  kEmptyInput,
  kInvalidSpec,
  kInvalidAlpha,
  kParseError,
  kNonNumericFeature,
  kMissingLabelColumn,
  kEmptyRound,
  kTooFewClients,
  kOverTrimmed,
  kSourceClassAbsent,
  kConfigInvalid,
  kIoError,
  kRoundFailed,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code lets
// callers (and the Python layer) branch on the failure class without parsing
// the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by CosineSimilarity / PairwiseCosine. `index` is the offending row
// for PairwiseCosine and -1 for the scalar form.
class ZeroNormError : public Error {
 public:
  ZeroNormError(int index, const std::string& message)
      : Error(ErrorCode::kZeroNorm, message), index_(index) {}

  int index() const { return index_; }

 private:
  int index_;
};

// Config validation failure; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(ErrorCode::kConfigInvalid, field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace fedshield

#endif  // FEDSHIELD_ERROR_H_
