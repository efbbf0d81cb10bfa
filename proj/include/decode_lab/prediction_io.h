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

// Predictions JSONL: line 1 is a header object (the resolved pipeline config
// plus whatever the caller records), then one object per record:
//   {"id","label","predicted","token","p_yes","survivor_count","pipeline_name"}

#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

#include "decode_lab/prediction.h"

namespace decode_lab {

struct PredictionFile {
  nlohmann::json header;
  std::vector<PredictionRecord> records;
};

std::string serialize_prediction(const PredictionRecord& p);

void write_predictions(const std::filesystem::path& path, const nlohmann::json& header,
                       std::span<const PredictionRecord> preds);

// Throws SchemaViolation with line numbers.
PredictionFile read_predictions(const std::filesystem::path& path);

}  // namespace decode_lab
