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

// JSONL logit-trace format.
//
//   line 1:  {"schema_version":"1","source":"synthetic"|"captured","generator_params":<json|null>}
//   line 2+: {"id":..,"dataset":..,"category":..,"label":"yes"|"no",
//             "variants":{name:{"logits":{token:float,...}},...}}
//
// Floats are written with 17 significant digits so values round-trip exactly.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "decode_lab/distribution.h"
#include "decode_lab/prediction.h"

namespace decode_lab {

inline constexpr std::string_view kTraceSchemaVersion = "1";
inline constexpr std::string_view kOriginalVariant = "original";
inline constexpr std::string_view kYesToken = "yes";
inline constexpr std::string_view kNoToken = "no";

// POPE negative-sampling subset; anything else is kept verbatim as kOther.
class Category {
 public:
  enum class Kind { kRandom, kPopular, kAdversarial, kOther };

  Category() = default;
  static Category parse(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  bool operator==(const Category&) const = default;

 private:
  Kind kind_ = Kind::kOther;
  std::string name_ = "other";
};

struct TraceRecord {
  std::string id;
  std::string dataset;
  Category category;
  Answer label = Answer::kNo;
  std::map<std::string, TokenDistribution, std::less<>> variants;

  // Throws MissingVariant naming this record.
  const TokenDistribution& variant(std::string_view name) const;

  bool operator==(const TraceRecord&) const = default;
};

enum class TraceSource { kSynthetic, kCaptured };

std::string_view to_string(TraceSource source);

struct TraceFileMeta {
  std::string schema_version{kTraceSchemaVersion};
  TraceSource source = TraceSource::kSynthetic;
  std::optional<nlohmann::json> generator_params;
};

// Throws SchemaViolation (line 0, i.e. not from a file) or MissingVariant.
void validate_record(const TraceRecord& record);

std::string serialize_meta(const TraceFileMeta& meta);
std::string serialize_record(const TraceRecord& record);

// Line parsers; `line_no` is only used for error reporting.
TraceFileMeta parse_meta_line(std::string_view line, std::size_t line_no);
TraceRecord parse_record_line(std::string_view line, std::size_t line_no);

// Single-consumer streaming reader. Validates every line; errors carry the
// 1-based line number.
class TraceReader {
 public:
  explicit TraceReader(const std::filesystem::path& path);

  const TraceFileMeta& meta() const noexcept { return meta_; }

  // Next validated record, std::nullopt at end of file.
  std::optional<TraceRecord> next();

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  std::size_t line_no_ = 0;
  TraceFileMeta meta_;
  std::unordered_set<std::string> seen_ids_;
};

struct TraceFile {
  TraceFileMeta meta;
  std::vector<TraceRecord> records;
};

TraceFile read_traces(const std::filesystem::path& path);

// Validates, then writes atomically (temp file + rename).
void write_traces(std::span<const TraceRecord> records, const TraceFileMeta& meta,
                  const std::filesystem::path& path);

}  // namespace decode_lab
