/*
 * Copyright 2026 The uqroute Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uqroute {

enum class ErrorCode {
  kMalformedRecord,
  kDuplicateId,
  kMissingLabel,
  kInvalidArgument,
  kMissingField,
  kNonCompliant,
  kDimensionMismatch,
  kSingleClassTrainingSet,
  kSingleClassLabels,
  kLengthMismatch,
  kEmptyKeptSet,
  kEmptyScores,
  kUnknownDataset,
  kSingleDataset,
  kEmptyCalibrationSet,
  kWeakEndpointUnavailable,
  kStrongEndpointUnavailable,
  kScoringFailed,
  kConfigError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type. `what()` carries
// "<Code>: <detail>", `detail()` just the detail, so callers can print a
// single machine-parseable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Raised by the trace loader; remembers the 1-based line number.
class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, std::string reason);

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace uqroute
