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

#include "decode_lab/diagnostics.h"

#include <string>
#include <vector>

#include "decode_lab/error.h"
#include "decode_lab/parallel.h"
#include "decode_lab/pipeline.h"
#include "decode_lab/rng.h"

namespace decode_lab {

using nlohmann::json;

ApcDegradationReport analyze_apc(std::span<const TraceRecord> traces, const ApcParams& params,
                                 std::size_t n_seed_replicates, std::uint64_t seed) {
  params.validate();
  if (n_seed_replicates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_seed_replicates must be >= 1");
  }
  if (traces.empty()) throw Error(ErrorCode::kEmptyInput, "no traces to analyze");

  std::vector<std::size_t> survivor_sizes(traces.size());
  std::vector<std::size_t> agreements(traces.size());
  parallel_for(traces.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const TraceRecord& r = traces[i];
      const TokenDistribution original = normalize(r.variant(kOriginalVariant));
      const std::string greedy = select_greedy(original).token;
      const TokenDistribution truncated = apply_apc(original, params);
      survivor_sizes[i] = truncated.size();
      const std::uint64_t base = record_seed(seed, r.id);
      std::size_t agree = 0;
      for (std::size_t rep = 0; rep < n_seed_replicates; ++rep) {
        agree += select_sample(truncated, derive_seed(base, rep)).token == greedy;
      }
      agreements[i] = agree;
    }
  });

  ApcDegradationReport report;
  report.n = traces.size();
  report.beta = params.beta;
  report.replicates = n_seed_replicates;
  report.seed = seed;
  std::size_t singletons = 0;
  std::size_t agree_total = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    ++report.survivor_histogram[survivor_sizes[i]];
    singletons += survivor_sizes[i] == 1;
    agree_total += agreements[i];
  }
  const double n = static_cast<double>(traces.size());
  report.singleton_fraction = static_cast<double>(singletons) / n;
  report.greedy_agreement =
      static_cast<double>(agree_total) / (n * static_cast<double>(n_seed_replicates));
  return report;
}

ShiftReport analyze_shift(std::span<const TraceRecord> traces, std::string_view contrast_variant,
                          const ContrastParams& params) {
  params.validate();
  if (traces.empty()) throw Error(ErrorCode::kEmptyInput, "no traces to analyze");
  double delta_sum = 0.0;
  std::size_t yes_before = 0;
  std::size_t yes_after = 0;
  std::size_t no_biased = 0;
  for (const auto& r : traces) {
    const TokenDistribution& original = r.variant(kOriginalVariant);
    const TokenDistribution& contrast = r.variant(contrast_variant);
    const TokenDistribution combined = combine_logits(original, contrast, params);
    const double gap_original = logit_gap(original);
    const double gap_contrast = logit_gap(contrast);
    delta_sum += logit_gap(combined) - gap_original;
    no_biased += gap_contrast < gap_original;
    yes_before += select_greedy(original).token == kYesToken;
    yes_after += select_greedy(combined).token == kYesToken;
  }
  const double n = static_cast<double>(traces.size());
  ShiftReport report;
  report.n = traces.size();
  report.mean_gap_delta = delta_sum / n;
  report.yes_rate_before = static_cast<double>(yes_before) / n;
  report.yes_rate_after = static_cast<double>(yes_after) / n;
  report.fraction_contrast_no_biased = static_cast<double>(no_biased) / n;
  return report;
}

EvalReport contrast_only_eval(std::span<const TraceRecord> traces,
                              std::string_view contrast_variant) {
  PipelineSpec spec;
  spec.variant_original = std::string(contrast_variant);
  return evaluate(run_pipeline_all(traces, spec));
}

json to_json(const ApcDegradationReport& r) {
  json histogram = json::object();
  for (const auto& [size, count] : r.survivor_histogram) histogram[std::to_string(size)] = count;
  return {{"n", r.n},
          {"beta", r.beta},
          {"replicates", r.replicates},
          {"seed", r.seed},
          {"singleton_fraction", r.singleton_fraction},
          {"survivor_histogram", histogram},
          {"greedy_agreement", r.greedy_agreement}};
}

json to_json(const ShiftReport& r) {
  return {{"n", r.n},
          {"mean_gap_delta", r.mean_gap_delta},
          {"yes_rate_before", r.yes_rate_before},
          {"yes_rate_after", r.yes_rate_after},
          {"fraction_contrast_no_biased", r.fraction_contrast_no_biased}};
}

}  // namespace decode_lab
