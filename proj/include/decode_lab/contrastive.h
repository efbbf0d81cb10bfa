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

#include <string>
#include <string_view>

#include "decode_lab/distribution.h"
#include "decode_lab/prediction.h"

namespace decode_lab {

enum class ContrastMethod { kVcd, kIcd, kSid };

std::string_view to_string(ContrastMethod method);
ContrastMethod parse_contrast_method(std::string_view name);

struct ContrastParams {
  ContrastMethod method = ContrastMethod::kVcd;
  double alpha = 1.0;   // VCD / SID amplification
  double lambda = 1.0;  // ICD penalty

  void validate() const;
};

struct OlmParams {
  double tau = 0.2;

  void validate() const;
};

// Per-token combined scores over the shared candidate set, before softmax:
//   VCD, SID: (1 + alpha) * original - alpha * contrast
//   ICD:      original - lambda * contrast
// Throws MismatchedCandidates when fewer than two tokens are shared.
TokenDistribution combine_logits(const TokenDistribution& original,
                                 const TokenDistribution& contrast, const ContrastParams& params);

// combine_logits followed by normalize.
TokenDistribution contrastive_combine(const TokenDistribution& original,
                                      const TokenDistribution& contrast,
                                      const ContrastParams& params);

// score(yes) - score(no). Throws MissingToken.
double logit_gap(const TokenDistribution& d, std::string_view yes_token = "yes",
                 std::string_view no_token = "no");

// True when |p(yes) - p(no)| < tau on the normalized distribution.
bool olm_triggers(const TokenDistribution& d, const OlmParams& params,
                  std::string_view yes_token = "yes", std::string_view no_token = "no");

// Yes when olm_triggers, otherwise the more probable of the two (ties: the
// lexicographically smaller token, as in greedy selection).
Answer olm_adjust(const TokenDistribution& d, const OlmParams& params,
                  std::string_view yes_token = "yes", std::string_view no_token = "no");

}  // namespace decode_lab
