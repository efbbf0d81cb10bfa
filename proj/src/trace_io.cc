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

#include <cmath>
#include <string>

#include "decode_lab/error.h"
#include "decode_lab/io_util.h"
#include "decode_lab/trace.h"

namespace decode_lab {

using nlohmann::json;

Category Category::parse(std::string_view name) {
  Category c;
  c.name_ = std::string(name);
  if (name == "random") {
    c.kind_ = Kind::kRandom;
  } else if (name == "popular") {
    c.kind_ = Kind::kPopular;
  } else if (name == "adversarial") {
    c.kind_ = Kind::kAdversarial;
  } else {
    c.kind_ = Kind::kOther;
  }
  return c;
}

const TokenDistribution& TraceRecord::variant(std::string_view name) const {
  auto it = variants.find(name);
  if (it == variants.end()) throw MissingVariant(id, std::string(name));
  return it->second;
}

std::string_view to_string(TraceSource source) {
  return source == TraceSource::kSynthetic ? "synthetic" : "captured";
}

void validate_record(const TraceRecord& record) {
  if (record.id.empty()) throw SchemaViolation(0, "id", "must be a non-empty string");
  if (record.category.name().empty()) {
    throw SchemaViolation(0, "category", "must be a non-empty string");
  }
  if (record.label == Answer::kOther) throw SchemaViolation(0, "label", "must be yes or no");
  if (!record.variants.contains(kOriginalVariant)) {
    throw MissingVariant(record.id, std::string(kOriginalVariant));
  }
  for (const auto& [name, dist] : record.variants) {
    if (name.empty()) throw SchemaViolation(0, "variants", "empty variant name");
    if (dist.normalized()) {
      throw SchemaViolation(0, "variants." + name, "traces store raw logits");
    }
    for (auto token : {kYesToken, kNoToken}) {
      if (!dist.contains(token)) {
        throw SchemaViolation(0, "variants." + name + ".logits",
                              "record '" + record.id + "' variant '" + name + "' lacks token '" +
                                  std::string(token) + "'");
      }
    }
  }
}

std::string serialize_meta(const TraceFileMeta& meta) {
  std::string out = "{\"schema_version\":" + quote_json(meta.schema_version) +
                    ",\"source\":" + quote_json(to_string(meta.source)) + ",\"generator_params\":";
  out += meta.generator_params ? meta.generator_params->dump() : "null";
  out += "}";
  return out;
}

std::string serialize_record(const TraceRecord& record) {
  std::string out;
  out.reserve(160);
  out += "{\"id\":" + quote_json(record.id);
  out += ",\"dataset\":" + quote_json(record.dataset);
  out += ",\"category\":" + quote_json(record.category.name());
  out += ",\"label\":" + quote_json(to_string(record.label));
  out += ",\"variants\":{";
  bool first_variant = true;
  for (const auto& [name, dist] : record.variants) {
    if (!first_variant) out += ',';
    first_variant = false;
    out += quote_json(name) + ":{\"logits\":{";
    bool first_token = true;
    for (const auto& [token, score] : dist.entries()) {
      if (!first_token) out += ',';
      first_token = false;
      out += quote_json(token) + ":" + format_double(score);
    }
    out += "}}";
  }
  out += "}}";
  return out;
}

namespace {

json parse_line_object(std::string_view line, std::size_t line_no) {
  std::string error;
  auto parsed = parse_json_strict(line, error);
  if (!parsed) throw SchemaViolation(line_no, "<line>", "invalid JSON: " + error);
  if (!parsed->is_object()) throw SchemaViolation(line_no, "<line>", "expected a JSON object");
  return std::move(*parsed);
}

void check_keys(const json& object, std::initializer_list<std::string_view> allowed,
                std::size_t line_no, const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) {
      throw SchemaViolation(line_no, where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

const std::string& require_string(const json& object, const char* field, std::size_t line_no) {
  auto it = object.find(field);
  if (it == object.end()) throw SchemaViolation(line_no, field, "missing");
  if (!it->is_string()) throw SchemaViolation(line_no, field, "must be a string");
  return it->get_ref<const std::string&>();
}

}  // namespace

TraceFileMeta parse_meta_line(std::string_view line, std::size_t line_no) {
  const json object = parse_line_object(line, line_no);
  check_keys(object, {"schema_version", "source", "generator_params"}, line_no, "");
  TraceFileMeta meta;
  meta.schema_version = require_string(object, "schema_version", line_no);
  if (meta.schema_version != kTraceSchemaVersion) {
    throw SchemaViolation(line_no, "schema_version",
                          "unknown schema version '" + meta.schema_version + "'");
  }
  const auto& source = require_string(object, "source", line_no);
  if (source == "synthetic") {
    meta.source = TraceSource::kSynthetic;
  } else if (source == "captured") {
    meta.source = TraceSource::kCaptured;
  } else {
    throw SchemaViolation(line_no, "source", "must be 'synthetic' or 'captured'");
  }
  if (auto it = object.find("generator_params"); it != object.end() && !it->is_null()) {
    meta.generator_params = *it;
  }
  return meta;
}

TraceRecord parse_record_line(std::string_view line, std::size_t line_no) {
  const json object = parse_line_object(line, line_no);
  check_keys(object, {"id", "dataset", "category", "label", "variants"}, line_no, "");
  TraceRecord record;
  record.id = require_string(object, "id", line_no);
  if (record.id.empty()) throw SchemaViolation(line_no, "id", "must be non-empty");
  record.dataset = require_string(object, "dataset", line_no);
  const auto& category = require_string(object, "category", line_no);
  if (category.empty()) throw SchemaViolation(line_no, "category", "must be non-empty");
  record.category = Category::parse(category);
  const auto& label = require_string(object, "label", line_no);
  if (label == "yes") {
    record.label = Answer::kYes;
  } else if (label == "no") {
    record.label = Answer::kNo;
  } else {
    throw SchemaViolation(line_no, "label", "must be 'yes' or 'no'");
  }

  auto variants = object.find("variants");
  if (variants == object.end()) throw SchemaViolation(line_no, "variants", "missing");
  if (!variants->is_object()) throw SchemaViolation(line_no, "variants", "must be an object");
  for (const auto& [name, body] : variants->items()) {
    const std::string where = "variants." + name;
    if (name.empty()) throw SchemaViolation(line_no, "variants", "empty variant name");
    if (!body.is_object()) throw SchemaViolation(line_no, where, "must be an object");
    check_keys(body, {"logits"}, line_no, where);
    auto logits = body.find("logits");
    if (logits == body.end()) throw SchemaViolation(line_no, where + ".logits", "missing");
    if (!logits->is_object()) {
      throw SchemaViolation(line_no, where + ".logits", "must be an object");
    }
    TokenDistribution::Entries entries;
    for (const auto& [token, value] : logits->items()) {
      if (token.empty()) throw SchemaViolation(line_no, where + ".logits", "empty token string");
      if (!value.is_number()) {
        throw SchemaViolation(line_no, where + ".logits." + token, "must be a number");
      }
      const double score = value.get<double>();
      if (!std::isfinite(score)) {
        throw SchemaViolation(line_no, where + ".logits." + token, "must be finite");
      }
      entries.emplace(token, score);
    }
    if (entries.size() < 2) {
      throw SchemaViolation(line_no, where + ".logits", "needs at least 2 tokens");
    }
    for (auto token : {kYesToken, kNoToken}) {
      if (!entries.contains(token)) {
        throw SchemaViolation(line_no, where + ".logits",
                              "variant '" + name + "' lacks token '" + std::string(token) + "'");
      }
    }
    record.variants.emplace(name, TokenDistribution::from_logits(std::move(entries)));
  }
  if (!record.variants.contains(kOriginalVariant)) {
    throw MissingVariant(record.id, std::string(kOriginalVariant), line_no);
  }
  return record;
}

TraceReader::TraceReader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw Error(ErrorCode::kIo, "cannot open trace file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in_, line)) {
    throw SchemaViolation(1, "schema_version", "missing header line in '" + path.string() + "'");
  }
  line_no_ = 1;
  meta_ = parse_meta_line(line, line_no_);
}

std::optional<TraceRecord> TraceReader::next() {
  std::string line;
  if (!std::getline(in_, line)) {
    if (in_.bad()) throw Error(ErrorCode::kIo, "read failed on '" + path_.string() + "'");
    return std::nullopt;
  }
  ++line_no_;
  TraceRecord record = parse_record_line(line, line_no_);
  if (!seen_ids_.insert(record.id).second) {
    throw Error(ErrorCode::kDuplicateId,
                "line " + std::to_string(line_no_) + ": duplicate id '" + record.id + "'");
  }
  return record;
}

TraceFile read_traces(const std::filesystem::path& path) {
  TraceReader reader(path);
  TraceFile file;
  file.meta = reader.meta();
  while (auto record = reader.next()) file.records.push_back(std::move(*record));
  return file;
}

void write_traces(std::span<const TraceRecord> records, const TraceFileMeta& meta,
                  const std::filesystem::path& path) {
  std::unordered_set<std::string_view> ids;
  for (const auto& record : records) {
    validate_record(record);
    if (!ids.insert(record.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + record.id + "'");
    }
  }
  atomic_write(path, [&](std::ostream& out) {
    out << serialize_meta(meta) << '\n';
    for (const auto& record : records) out << serialize_record(record) << '\n';
  });
}

}  // namespace decode_lab
