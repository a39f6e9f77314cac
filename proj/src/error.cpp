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

#include "uqroute/error.hpp"

namespace uqroute {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kMissingLabel: return "MissingLabel";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kNonCompliant: return "NonCompliant";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSingleClassTrainingSet: return "SingleClassTrainingSet";
    case ErrorCode::kSingleClassLabels: return "SingleClassLabels";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyKeptSet: return "EmptyKeptSet";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kUnknownDataset: return "UnknownDataset";
    case ErrorCode::kSingleDataset: return "SingleDataset";
    case ErrorCode::kEmptyCalibrationSet: return "EmptyCalibrationSet";
    case ErrorCode::kWeakEndpointUnavailable: return "WeakEndpointUnavailable";
    case ErrorCode::kStrongEndpointUnavailable: return "StrongEndpointUnavailable";
    case ErrorCode::kScoringFailed: return "ScoringFailed";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(std::move(detail)) {}

MalformedRecord::MalformedRecord(std::size_t line, std::string reason)
    : Error(ErrorCode::kMalformedRecord,
            "line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(std::move(reason)) {}

}  // namespace uqroute
