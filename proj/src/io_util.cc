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

#include "decode_lab/io_util.h"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "decode_lab/error.h"

namespace decode_lab {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  std::string out(buf);
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

std::string quote_json(std::string_view text) { return nlohmann::json(std::string(text)).dump(); }

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open '" + tmp.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::kIo, "cannot rename into '" + path.string() + "': " + ec.message());
  }
}

void atomic_write_text(const std::filesystem::path& path, std::string_view text) {
  atomic_write(path, [&](std::ostream& out) { out << text; });
}

std::optional<nlohmann::json> parse_json_strict(std::string_view text, std::string& error) {
  using nlohmann::json;
  std::vector<std::vector<std::string>> keys;
  std::string duplicate;
  json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case json::parse_event_t::object_end:
        if (!keys.empty()) keys.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto& key = parsed.get_ref<const std::string&>();
        auto& current = keys.back();
        for (const auto& k : current) {
          if (k == key && duplicate.empty()) duplicate = key;
        }
        current.push_back(key);
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    json parsed = json::parse(text.begin(), text.end(), cb);
    if (!duplicate.empty()) {
      error = "duplicate key '" + duplicate + "'";
      return std::nullopt;
    }
    return parsed;
  } catch (const json::exception& e) {
    error = e.what();
    return std::nullopt;
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string error;
  auto parsed = parse_json_strict(buffer.str(), error);
  if (!parsed) {
    throw Error(ErrorCode::kInvalidArgument, "'" + path.string() + "' is not valid JSON: " + error);
  }
  return *parsed;
}

void reject_unknown_keys(const nlohmann::json& object,
                         std::initializer_list<std::string_view> allowed,
                         std::string_view context) {
  if (!object.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(context) + " must be a JSON object");
  }
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (auto name : allowed) known = known || key == name;
    if (!known) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown field '" + key + "' in " + std::string(context));
    }
  }
}

}  // namespace decode_lab
