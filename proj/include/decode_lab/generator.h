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

// Parametric binary-QA logit traces.
//
// Record i draws from Xoshiro256(derive_seed(seed, i)), always in this order:
//   u                 label = yes iff u < positive_rate
//   z0                gap g = mu_label + skew_delta + sigma * z0
//   z_vcd, z_icd, z_sid
//                     contrast gap = g - contrast_shift + contrast_sigma * z_v
// The pba variant has gap g + pba_shift. Every variant stores logits
// {yes: gap / 2, no: -gap / 2}. Because the draw order never depends on the
// parameter values, two parameter sets with the same seed share their noise
// (common random numbers), which makes paired comparisons exact.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "decode_lab/trace.h"

namespace decode_lab {

struct GeneratorParams {
  std::size_t n_records = 1000;
  double positive_rate = 0.5;
  double mu_pos = 2.0;
  double mu_neg = -2.0;
  double sigma = 1.0;
  double skew_delta = 0.0;
  double contrast_shift = 0.0;
  // Extra noise on contrast gaps; defaults to sigma when unset.
  std::optional<double> contrast_sigma;
  double pba_shift = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  double effective_contrast_sigma() const { return contrast_sigma.value_or(sigma); }

  bool operator==(const GeneratorParams&) const = default;
};

nlohmann::json to_json(const GeneratorParams& params);
GeneratorParams generator_params_from_json(const nlohmann::json& j);

struct TraceLabels {
  std::string dataset = "synthetic";
  std::string category = "other";
  std::string id_prefix = "syn";

  bool operator==(const TraceLabels&) const = default;
};

inline const std::vector<std::string>& synthetic_contrast_variants() {
  static const std::vector<std::string> names{"vcd", "icd", "sid"};
  return names;
}
inline constexpr std::string_view kPbaVariant = "pba";

std::vector<TraceRecord> generate(const GeneratorParams& params, const TraceLabels& labels = {});

// Header for files written from generated traces.
TraceFileMeta synthetic_meta(const GeneratorParams& params);

struct CalibrationTarget {
  double target_accuracy = 0.0;
  double target_yes_rate = 0.0;
  double tolerance = 0.03;

  void validate() const;

  bool operator==(const CalibrationTarget&) const = default;
};

inline constexpr int kCalibrationSweepBudget = 60;

// Fits (mu_pos, mu_neg, skew_delta) so that vanilla greedy decoding on
// generate(result) hits the target accuracy and yes-rate within tolerance.
//
// Feasibility: target_accuracy >= max(positive_rate, 1 - positive_rate), and
// the implied true/false-positive rates lie in [0, 1]. The search starts from
// the closed-form Gaussian solution, then runs coordinate descent on a
// separate calibration draw (seed derive_seed(seed, kCalibrationSalt)) for at
// most kCalibrationSweepBudget sweeps. The result is accepted only if the
// held-out draw (the returned params' own seed), decoded through the real
// greedy pipeline, is within tolerance. Throws CalibrationFailed otherwise.
GeneratorParams calibrate(const CalibrationTarget& target, const GeneratorParams& base);

inline constexpr std::uint64_t kCalibrationSalt = 0xCA11B2A7E5EEDULL;

// Named, reproducible regime: calibrate(target, base) yields `params`.
struct Preset {
  std::string name;
  CalibrationTarget target;
  TraceLabels labels;
  GeneratorParams params;

  bool operator==(const Preset&) const = default;
};

nlohmann::json to_json(const Preset& preset);
Preset preset_from_json(const nlohmann::json& j);

// Uncalibrated definitions of the shipped presets ("coco-random",
// "gqa-adversarial"); `params` holds the calibration base.
const std::vector<Preset>& builtin_preset_definitions();
const Preset* find_builtin_preset(std::string_view name);

Preset calibrate_preset(const Preset& definition);

}  // namespace decode_lab
