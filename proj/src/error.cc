/* Copyright 2026 The decode-lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "decode_lab/error.h"

#include <utility>

namespace decode_lab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyDistribution: return "EmptyDistribution";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMismatchedCandidates: return "MismatchedCandidates";
    case ErrorCode::kMissingToken: return "MissingToken";
    case ErrorCode::kMissingVariant: return "MissingVariant";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kCalibrationFailed: return "CalibrationFailed";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMissingToken:
    case ErrorCode::kMissingVariant:
    case ErrorCode::kSchemaViolation:
    case ErrorCode::kDuplicateId:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

SchemaViolation::SchemaViolation(std::size_t line, std::string field, const std::string& detail)
    : Error(ErrorCode::kSchemaViolation,
            "line " + std::to_string(line) + ", field '" + field + "': " + detail),
      line_(line),
      field_(std::move(field)) {}

MissingVariant::MissingVariant(std::string record_id, std::string variant, std::size_t line)
    : Error(ErrorCode::kMissingVariant,
            (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + "record '" +
                record_id + "' has no variant '" + variant + "'"),
      record_id_(std::move(record_id)),
      variant_(std::move(variant)) {}

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

IdMismatch::IdMismatch(std::vector<std::string> symmetric_difference)
    : Error(ErrorCode::kIdMismatch,
            "prediction sets differ in ids: [" + join_ids(symmetric_difference) + "]"),
      ids_(std::move(symmetric_difference)) {}

CalibrationFailed::CalibrationFailed(const std::string& reason, double accuracy_residual,
                                     double yes_rate_residual)
    : Error(ErrorCode::kCalibrationFailed,
            reason + " (accuracy residual " + std::to_string(accuracy_residual) +
                ", yes-rate residual " + std::to_string(yes_rate_residual) + ")"),
      accuracy_residual_(accuracy_residual),
      yes_rate_residual_(yes_rate_residual) {}

}  // namespace decode_lab
