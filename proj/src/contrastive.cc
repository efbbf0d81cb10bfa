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

#include "decode_lab/contrastive.h"

#include <cmath>
#include <string>

#include "decode_lab/error.h"

namespace decode_lab {

std::string_view to_string(ContrastMethod method) {
  switch (method) {
    case ContrastMethod::kVcd: return "VCD";
    case ContrastMethod::kIcd: return "ICD";
    case ContrastMethod::kSid: return "SID";
  }
  return "VCD";
}

ContrastMethod parse_contrast_method(std::string_view name) {
  if (name == "VCD" || name == "vcd") return ContrastMethod::kVcd;
  if (name == "ICD" || name == "icd") return ContrastMethod::kIcd;
  if (name == "SID" || name == "sid") return ContrastMethod::kSid;
  throw Error(ErrorCode::kInvalidArgument, "unknown contrast method '" + std::string(name) + "'");
}

void ContrastParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be finite and >= 0");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be finite and >= 0");
  }
}

void OlmParams::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be finite and >= 0");
  }
}

TokenDistribution combine_logits(const TokenDistribution& original,
                                 const TokenDistribution& contrast, const ContrastParams& params) {
  params.validate();
  double keep = 1.0;
  double subtract = 0.0;
  switch (params.method) {
    case ContrastMethod::kVcd:
    case ContrastMethod::kSid:
      keep = 1.0 + params.alpha;
      subtract = params.alpha;
      break;
    case ContrastMethod::kIcd:
      subtract = params.lambda;
      break;
  }
  TokenDistribution::Entries combined;
  for (const auto& [token, score] : original.entries()) {
    const auto other = contrast.log_score(token);
    if (!other) continue;
    combined.emplace_hint(combined.end(), token, keep * score - subtract * *other);
  }
  if (combined.size() < 2) {
    throw Error(ErrorCode::kMismatchedCandidates,
                "original and contrast share " + std::to_string(combined.size()) +
                    " candidate tokens; need at least 2");
  }
  return TokenDistribution::from_logits(std::move(combined));
}

TokenDistribution contrastive_combine(const TokenDistribution& original,
                                      const TokenDistribution& contrast,
                                      const ContrastParams& params) {
  return normalize(combine_logits(original, contrast, params));
}

double logit_gap(const TokenDistribution& d, std::string_view yes_token,
                 std::string_view no_token) {
  const auto yes = d.log_score(yes_token);
  const auto no = d.log_score(no_token);
  if (!yes || !no) {
    throw Error(ErrorCode::kMissingToken, "distribution lacks '" +
                                              std::string(yes ? no_token : yes_token) + "'");
  }
  return *yes - *no;
}

namespace {

const TokenDistribution& require_pair(const TokenDistribution& d, std::string_view yes_token,
                                      std::string_view no_token,
                                      std::optional<TokenDistribution>& storage) {
  for (auto token : {yes_token, no_token}) {
    if (!d.contains(token)) {
      throw Error(ErrorCode::kMissingToken, "distribution lacks '" + std::string(token) + "'");
    }
  }
  if (d.normalized()) return d;
  storage = normalize(d);
  return *storage;
}

}  // namespace

bool olm_triggers(const TokenDistribution& d, const OlmParams& params, std::string_view yes_token,
                  std::string_view no_token) {
  params.validate();
  std::optional<TokenDistribution> storage;
  const auto& n = require_pair(d, yes_token, no_token, storage);
  return std::abs(n.prob(yes_token) - n.prob(no_token)) < params.tau;
}

Answer olm_adjust(const TokenDistribution& d, const OlmParams& params, std::string_view yes_token,
                  std::string_view no_token) {
  if (olm_triggers(d, params, yes_token, no_token)) return Answer::kYes;
  std::optional<TokenDistribution> storage;
  const auto& n = require_pair(d, yes_token, no_token, storage);
  const double p_yes = n.prob(yes_token);
  const double p_no = n.prob(no_token);
  if (p_yes > p_no) return Answer::kYes;
  if (p_no > p_yes) return Answer::kNo;
  return yes_token < no_token ? Answer::kYes : Answer::kNo;
}

}  // namespace decode_lab
