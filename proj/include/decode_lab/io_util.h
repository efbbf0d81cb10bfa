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

#include <filesystem>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"

namespace decode_lab {

// 17 significant digits; always carries a '.' or exponent so readers parse
// it back as a float (this also keeps the sign of -0.0).
std::string format_double(double value);

// JSON string literal with escaping.
std::string quote_json(std::string_view text);

// Writes through `body` into a sibling temp file, then renames over `path`.
// Throws Error(kIo) naming the path.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body);

void atomic_write_text(const std::filesystem::path& path, std::string_view text);

// Parses one JSON document, rejecting duplicate object keys. Returns
// std::nullopt and fills `error` on failure.
std::optional<nlohmann::json> parse_json_strict(std::string_view text, std::string& error);

// Reads a whole file as a JSON document (config files, presets).
nlohmann::json read_json_file(const std::filesystem::path& path);

// Throws InvalidArgument listing the first key of `object` not in `allowed`.
void reject_unknown_keys(const nlohmann::json& object, std::initializer_list<std::string_view> allowed,
                         std::string_view context);

}  // namespace decode_lab
