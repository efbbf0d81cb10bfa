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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "decode_lab/contrastive.h"
#include "decode_lab/distribution.h"
#include "decode_lab/prediction.h"
#include "decode_lab/trace.h"

namespace decode_lab {

enum class Strategy { kGreedy, kSample };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

// One decoding configuration. Stages run in a fixed order:
//   contrast-combine -> APC mask -> selection -> OLM override.
// PBA is expressed by pointing `variant_original` at the "pba" variant.
struct PipelineSpec {
  std::string variant_original{kOriginalVariant};
  std::optional<std::string> variant_contrast;
  std::optional<ContrastParams> contrast;
  std::optional<ApcParams> apc;
  std::optional<OlmParams> olm;
  Strategy strategy = Strategy::kGreedy;
  std::uint64_t global_seed = 0;
  // Display label; derived from the stages when empty.
  std::string name;

  // Throws InvalidArgument on inconsistent or out-of-range settings.
  void validate() const;

  std::string display_name() const;
};

nlohmann::json to_json(const PipelineSpec& spec);

// Rejects unknown fields. Missing fields take the defaults above.
PipelineSpec pipeline_spec_from_json(const nlohmann::json& j);

// Per-record seed: derive_seed(global_seed, fnv1a64(id)).
std::uint64_t record_seed(std::uint64_t global_seed, std::string_view record_id);

PredictionRecord run_pipeline(const TraceRecord& record, const PipelineSpec& spec);

// Record-parallel (see parallel.h); output order matches `records`.
std::vector<PredictionRecord> run_pipeline_all(std::span<const TraceRecord> records,
                                               const PipelineSpec& spec);

}  // namespace decode_lab
