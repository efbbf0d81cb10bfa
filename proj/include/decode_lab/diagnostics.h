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
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "decode_lab/contrastive.h"
#include "decode_lab/distribution.h"
#include "decode_lab/evaluation.h"
#include "decode_lab/trace.h"

namespace decode_lab {

struct ApcDegradationReport {
  std::size_t n = 0;
  double beta = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  // Records whose original-variant survivor set is a single token.
  double singleton_fraction = 0.0;
  // survivor-set size -> record count
  std::map<std::size_t, std::size_t> survivor_histogram;
  // Fraction of (record, replicate) draws where sampling after APC picks the
  // greedy token.
  double greedy_agreement = 0.0;
};

// Replicate r of record i samples with derive_seed(record_seed(seed, id), r).
// The seeds do not depend on beta, so reports at different beta are paired.
ApcDegradationReport analyze_apc(std::span<const TraceRecord> traces, const ApcParams& params,
                                 std::size_t n_seed_replicates, std::uint64_t seed = 0);

struct ShiftReport {
  std::size_t n = 0;
  // mean over records of gap(combined) - gap(original)
  double mean_gap_delta = 0.0;
  // Greedy yes-rates on the original and on the combined distribution.
  double yes_rate_before = 0.0;
  double yes_rate_after = 0.0;
  // Records with gap(contrast) < gap(original).
  double fraction_contrast_no_biased = 0.0;
};

ShiftReport analyze_shift(std::span<const TraceRecord> traces, std::string_view contrast_variant,
                          const ContrastParams& params);

// Greedy decoding of the contrast variant on its own.
EvalReport contrast_only_eval(std::span<const TraceRecord> traces,
                              std::string_view contrast_variant);

nlohmann::json to_json(const ApcDegradationReport& report);
nlohmann::json to_json(const ShiftReport& report);

}  // namespace decode_lab
