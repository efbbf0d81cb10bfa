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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace decode_lab {

enum class ErrorCode {
  kEmptyDistribution,
  kNonFinite,
  kInvalidArgument,
  kMismatchedCandidates,
  kMissingToken,
  kMissingVariant,
  kSchemaViolation,
  kDuplicateId,
  kEmptyInput,
  kIdMismatch,
  kCalibrationFailed,
  kIo,
};

const char* error_code_name(ErrorCode code);

// Validation-class errors are caused by the caller's inputs or configuration;
// everything else is a runtime data/environment failure.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SchemaViolation : public Error {
 public:
  SchemaViolation(std::size_t line, std::string field, const std::string& detail);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class MissingVariant : public Error {
 public:
  // `line` > 0 adds file context to the message.
  MissingVariant(std::string record_id, std::string variant, std::size_t line = 0);

  const std::string& record_id() const noexcept { return record_id_; }
  const std::string& variant() const noexcept { return variant_; }

 private:
  std::string record_id_;
  std::string variant_;
};

class IdMismatch : public Error {
 public:
  explicit IdMismatch(std::vector<std::string> symmetric_difference);

  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

class CalibrationFailed : public Error {
 public:
  CalibrationFailed(const std::string& reason, double accuracy_residual,
                    double yes_rate_residual);

  double accuracy_residual() const noexcept { return accuracy_residual_; }
  double yes_rate_residual() const noexcept { return yes_rate_residual_; }

 private:
  double accuracy_residual_;
  double yes_rate_residual_;
};

}  // namespace decode_lab
