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

#include "decode_lab/pipeline.h"

#include <cctype>
#include <cstdio>
#include <string>

#include "decode_lab/error.h"
#include "decode_lab/io_util.h"
#include "decode_lab/parallel.h"
#include "decode_lab/rng.h"

namespace decode_lab {

using nlohmann::json;

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::kGreedy ? "greedy" : "sample";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "sample") return Strategy::kSample;
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

void PipelineSpec::validate() const {
  if (variant_original.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "variant_original must be non-empty");
  }
  if (contrast.has_value() != variant_contrast.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "contrast parameters and variant_contrast must be given together");
  }
  if (variant_contrast && variant_contrast->empty()) {
    throw Error(ErrorCode::kInvalidArgument, "variant_contrast must be non-empty");
  }
  if (contrast) contrast->validate();
  if (apc) apc->validate();
  if (olm) olm->validate();
}

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string PipelineSpec::display_name() const {
  if (!name.empty()) return name;
  std::string out;
  if (variant_original != kOriginalVariant) out += variant_original + ":";
  if (contrast) {
    out += lower(to_string(contrast->method));
    out += contrast->method == ContrastMethod::kIcd ? "(lambda=" + short_number(contrast->lambda)
                                                    : "(alpha=" + short_number(contrast->alpha);
    if (*variant_contrast != lower(to_string(contrast->method))) out += ",vs=" + *variant_contrast;
    out += ")+";
  }
  if (apc) out += "apc(beta=" + short_number(apc->beta) + ")+";
  out += to_string(strategy);
  if (olm) out += "+olm(tau=" + short_number(olm->tau) + ")";
  return out;
}

json to_json(const PipelineSpec& spec) {
  json j;
  j["variant_original"] = spec.variant_original;
  j["variant_contrast"] = spec.variant_contrast ? json(*spec.variant_contrast) : json(nullptr);
  if (spec.contrast) {
    j["contrast"] = {{"method", std::string(to_string(spec.contrast->method))},
                     {"alpha", spec.contrast->alpha},
                     {"lambda", spec.contrast->lambda}};
  } else {
    j["contrast"] = nullptr;
  }
  j["apc"] = spec.apc ? json{{"beta", spec.apc->beta}} : json(nullptr);
  j["olm"] = spec.olm ? json{{"tau", spec.olm->tau}} : json(nullptr);
  j["strategy"] = std::string(to_string(spec.strategy));
  j["global_seed"] = spec.global_seed;
  if (!spec.name.empty()) j["name"] = spec.name;
  return j;
}

namespace {

double number_field(const json& object, const char* field, double fallback,
                    std::string_view context) {
  auto it = object.find(field);
  if (it == object.end()) return fallback;
  if (!it->is_number()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(context) + "." + field + " must be a number");
  }
  return it->get<double>();
}

std::string string_field(const json& object, const char* field, std::string fallback) {
  auto it = object.find(field);
  if (it == object.end()) return fallback;
  if (!it->is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

PipelineSpec pipeline_spec_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"variant_original", "variant_contrast", "contrast", "apc", "olm",
                       "strategy", "global_seed", "name"},
                      "PipelineSpec");
  PipelineSpec spec;
  spec.variant_original = string_field(j, "variant_original", spec.variant_original);
  if (auto it = j.find("variant_contrast"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw Error(ErrorCode::kInvalidArgument, "variant_contrast must be a string or null");
    }
    spec.variant_contrast = it->get<std::string>();
  }
  if (auto it = j.find("contrast"); it != j.end() && !it->is_null()) {
    reject_unknown_keys(*it, {"method", "alpha", "lambda"}, "PipelineSpec.contrast");
    ContrastParams params;
    params.method = parse_contrast_method(string_field(*it, "method", "VCD"));
    params.alpha = number_field(*it, "alpha", params.alpha, "contrast");
    params.lambda = number_field(*it, "lambda", params.lambda, "contrast");
    spec.contrast = params;
  }
  if (auto it = j.find("apc"); it != j.end() && !it->is_null()) {
    reject_unknown_keys(*it, {"beta"}, "PipelineSpec.apc");
    spec.apc = ApcParams{number_field(*it, "beta", ApcParams{}.beta, "apc")};
  }
  if (auto it = j.find("olm"); it != j.end() && !it->is_null()) {
    reject_unknown_keys(*it, {"tau"}, "PipelineSpec.olm");
    spec.olm = OlmParams{number_field(*it, "tau", OlmParams{}.tau, "olm")};
  }
  spec.strategy = parse_strategy(string_field(j, "strategy", "greedy"));
  if (auto it = j.find("global_seed"); it != j.end()) {
    if (!it->is_number_unsigned()) {
      throw Error(ErrorCode::kInvalidArgument, "global_seed must be an unsigned integer");
    }
    spec.global_seed = it->get<std::uint64_t>();
  }
  spec.name = string_field(j, "name", "");
  spec.validate();
  return spec;
}

std::uint64_t record_seed(std::uint64_t global_seed, std::string_view record_id) {
  return derive_seed(global_seed, fnv1a64(record_id));
}

PredictionRecord run_pipeline(const TraceRecord& record, const PipelineSpec& spec) {
  spec.validate();
  const TokenDistribution& original_raw = record.variant(spec.variant_original);
  const TokenDistribution original = normalize(original_raw);

  TokenDistribution working =
      spec.contrast ? contrastive_combine(original_raw, record.variant(*spec.variant_contrast),
                                          *spec.contrast)
                    : original;
  if (spec.apc) {
    // Plausibility is judged on the original distribution, then applied as a
    // mask to whatever the contrast stage produced.
    working = restrict_to(working, apc_survivors(original, *spec.apc));
  }

  const SelectionOutcome outcome = spec.strategy == Strategy::kGreedy
                                       ? select_greedy(working)
                                       : select_sample(working, record_seed(spec.global_seed, record.id));

  PredictionRecord out;
  out.id = record.id;
  out.label = record.label;
  out.token = outcome.token;
  out.predicted = answer_for_token(outcome.token, kYesToken, kNoToken);
  out.p_yes = working.prob(kYesToken);
  out.survivor_count = working.size();
  out.pipeline_name = spec.display_name();
  if (spec.olm && olm_triggers(original, *spec.olm, kYesToken, kNoToken)) {
    out.predicted = Answer::kYes;
  }
  return out;
}

std::vector<PredictionRecord> run_pipeline_all(std::span<const TraceRecord> records,
                                               const PipelineSpec& spec) {
  spec.validate();
  std::vector<PredictionRecord> out(records.size());
  parallel_for(records.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = run_pipeline(records[i], spec);
  });
  return out;
}

}  // namespace decode_lab
