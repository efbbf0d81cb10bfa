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

#include "decode_lab/prediction_io.h"

#include <cmath>
#include <fstream>
#include <string>

#include "decode_lab/error.h"
#include "decode_lab/io_util.h"

namespace decode_lab {

using nlohmann::json;

std::string serialize_prediction(const PredictionRecord& p) {
  return "{\"id\":" + quote_json(p.id) + ",\"label\":" + quote_json(to_string(p.label)) +
         ",\"predicted\":" + quote_json(to_string(p.predicted)) + ",\"token\":" +
         quote_json(p.token) + ",\"p_yes\":" + format_double(p.p_yes) +
         ",\"survivor_count\":" + std::to_string(p.survivor_count) +
         ",\"pipeline_name\":" + quote_json(p.pipeline_name) + "}";
}

void write_predictions(const std::filesystem::path& path, const json& header,
                       std::span<const PredictionRecord> preds) {
  atomic_write(path, [&](std::ostream& out) {
    out << header.dump() << '\n';
    for (const auto& p : preds) out << serialize_prediction(p) << '\n';
  });
}

namespace {

const json& field(const json& object, const char* name, std::size_t line) {
  auto it = object.find(name);
  if (it == object.end()) throw SchemaViolation(line, name, "missing");
  return *it;
}

std::string string_at(const json& object, const char* name, std::size_t line) {
  const json& v = field(object, name, line);
  if (!v.is_string()) throw SchemaViolation(line, name, "must be a string");
  return v.get<std::string>();
}

Answer answer_at(const json& object, const char* name, std::size_t line) {
  const std::string text = string_at(object, name, line);
  if (text != "yes" && text != "no" && text != "other") {
    throw SchemaViolation(line, name, "must be yes, no or other");
  }
  return parse_answer(text);
}

}  // namespace

PredictionFile read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open predictions file '" + path.string() + "'");
  PredictionFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string error;
    auto parsed = parse_json_strict(line, error);
    if (!parsed || !parsed->is_object()) {
      throw SchemaViolation(line_no, "<line>", parsed ? "expected a JSON object" : error);
    }
    if (line_no == 1) {
      file.header = std::move(*parsed);
      continue;
    }
    const json& o = *parsed;
    for (const auto& [key, value] : o.items()) {
      if (key != "id" && key != "label" && key != "predicted" && key != "token" &&
          key != "p_yes" && key != "survivor_count" && key != "pipeline_name") {
        throw SchemaViolation(line_no, key, "unknown field");
      }
    }
    PredictionRecord p;
    p.id = string_at(o, "id", line_no);
    p.label = answer_at(o, "label", line_no);
    if (p.label == Answer::kOther) throw SchemaViolation(line_no, "label", "must be yes or no");
    p.predicted = answer_at(o, "predicted", line_no);
    p.token = string_at(o, "token", line_no);
    const json& p_yes = field(o, "p_yes", line_no);
    if (!p_yes.is_number()) throw SchemaViolation(line_no, "p_yes", "must be a number");
    p.p_yes = p_yes.get<double>();
    if (!(p.p_yes >= 0.0 && p.p_yes <= 1.0)) {
      throw SchemaViolation(line_no, "p_yes", "must lie in [0, 1]");
    }
    const json& survivors = field(o, "survivor_count", line_no);
    if (!survivors.is_number_unsigned() || survivors.get<std::size_t>() < 1) {
      throw SchemaViolation(line_no, "survivor_count", "must be a positive integer");
    }
    p.survivor_count = survivors.get<std::size_t>();
    p.pipeline_name = string_at(o, "pipeline_name", line_no);
    file.records.push_back(std::move(p));
  }
  if (line_no == 0) throw SchemaViolation(1, "<header>", "empty predictions file");
  return file;
}

}  // namespace decode_lab
