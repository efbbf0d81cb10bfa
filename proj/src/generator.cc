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

#include "decode_lab/generator.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "decode_lab/error.h"
#include "decode_lab/evaluation.h"
#include "decode_lab/io_util.h"
#include "decode_lab/parallel.h"
#include "decode_lab/pipeline.h"
#include "decode_lab/rng.h"

namespace decode_lab {

using nlohmann::json;

void GeneratorParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (n_records < 1) fail("n_records must be >= 1");
  if (!(positive_rate >= 0.0 && positive_rate <= 1.0)) fail("positive_rate must lie in [0, 1]");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma must be finite and > 0");
  if (contrast_sigma && (!(*contrast_sigma >= 0.0) || !std::isfinite(*contrast_sigma))) {
    fail("contrast_sigma must be finite and >= 0");
  }
  if (!(contrast_shift >= 0.0) || !std::isfinite(contrast_shift)) {
    fail("contrast_shift must be finite and >= 0");
  }
  if (!(pba_shift >= 0.0) || !std::isfinite(pba_shift)) fail("pba_shift must be finite and >= 0");
  for (double v : {mu_pos, mu_neg, skew_delta}) {
    if (!std::isfinite(v)) fail("mu_pos, mu_neg and skew_delta must be finite");
  }
}

json to_json(const GeneratorParams& p) {
  json j;
  j["n_records"] = p.n_records;
  j["positive_rate"] = p.positive_rate;
  j["mu_pos"] = p.mu_pos;
  j["mu_neg"] = p.mu_neg;
  j["sigma"] = p.sigma;
  j["skew_delta"] = p.skew_delta;
  j["contrast_shift"] = p.contrast_shift;
  j["contrast_sigma"] = p.contrast_sigma ? json(*p.contrast_sigma) : json(nullptr);
  j["pba_shift"] = p.pba_shift;
  j["seed"] = p.seed;
  return j;
}

namespace {

double read_number(const json& j, const char* field, double fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_number()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be a number");
  }
  return it->get<double>();
}

std::uint64_t read_unsigned(const json& j, const char* field, std::uint64_t fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_number_unsigned() && it->is_number_integer()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be >= 0");
  }
  if (!it->is_number_unsigned()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be an unsigned integer");
  }
  return it->get<std::uint64_t>();
}

std::string read_string(const json& j, const char* field, const std::string& fallback) {
  auto it = j.find(field);
  if (it == j.end()) return fallback;
  if (!it->is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

GeneratorParams generator_params_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"n_records", "positive_rate", "mu_pos", "mu_neg", "sigma", "skew_delta",
                       "contrast_shift", "contrast_sigma", "pba_shift", "seed"},
                      "GeneratorParams");
  GeneratorParams p;
  p.n_records = static_cast<std::size_t>(read_unsigned(j, "n_records", p.n_records));
  p.positive_rate = read_number(j, "positive_rate", p.positive_rate);
  p.mu_pos = read_number(j, "mu_pos", p.mu_pos);
  p.mu_neg = read_number(j, "mu_neg", p.mu_neg);
  p.sigma = read_number(j, "sigma", p.sigma);
  p.skew_delta = read_number(j, "skew_delta", p.skew_delta);
  p.contrast_shift = read_number(j, "contrast_shift", p.contrast_shift);
  if (auto it = j.find("contrast_sigma"); it != j.end() && !it->is_null()) {
    p.contrast_sigma = read_number(j, "contrast_sigma", 0.0);
  }
  p.pba_shift = read_number(j, "pba_shift", p.pba_shift);
  p.seed = read_unsigned(j, "seed", p.seed);
  p.validate();
  return p;
}

namespace {

TokenDistribution gap_logits(double gap) {
  return TokenDistribution::from_logits({{std::string(kYesToken), gap / 2.0},
                                         {std::string(kNoToken), -gap / 2.0}});
}

std::string record_id(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", i);
  return prefix + "-" + buf;
}

}  // namespace

std::vector<TraceRecord> generate(const GeneratorParams& params, const TraceLabels& labels) {
  params.validate();
  const Category category = Category::parse(labels.category);
  const double contrast_sigma = params.effective_contrast_sigma();
  std::vector<TraceRecord> records(params.n_records);
  parallel_for(params.n_records, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Xoshiro256 rng(derive_seed(params.seed, i));
      const bool positive = rng.uniform01() < params.positive_rate;
      const double gap = (positive ? params.mu_pos : params.mu_neg) + params.skew_delta +
                         params.sigma * rng.normal();
      TraceRecord& r = records[i];
      r.id = record_id(labels.id_prefix, i);
      r.dataset = labels.dataset;
      r.category = category;
      r.label = positive ? Answer::kYes : Answer::kNo;
      r.variants.emplace(std::string(kOriginalVariant), gap_logits(gap));
      for (const auto& name : synthetic_contrast_variants()) {
        const double contrast_gap = gap - params.contrast_shift + contrast_sigma * rng.normal();
        r.variants.emplace(name, gap_logits(contrast_gap));
      }
      r.variants.emplace(std::string(kPbaVariant), gap_logits(gap + params.pba_shift));
    }
  });
  return records;
}

TraceFileMeta synthetic_meta(const GeneratorParams& params) {
  TraceFileMeta meta;
  meta.source = TraceSource::kSynthetic;
  meta.generator_params = to_json(params);
  return meta;
}

void CalibrationTarget::validate() const {
  for (double v : {target_accuracy, target_yes_rate, tolerance}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "calibration target values must lie in [0, 1]");
    }
  }
}

namespace {

// Label and base noise of each record, drawn exactly as generate() does.
struct CalibrationDraw {
  std::vector<unsigned char> positive;
  std::vector<double> z;
};

CalibrationDraw draw_base_noise(const GeneratorParams& params, std::uint64_t seed) {
  CalibrationDraw draw;
  draw.positive.resize(params.n_records);
  draw.z.resize(params.n_records);
  for (std::size_t i = 0; i < params.n_records; ++i) {
    Xoshiro256 rng(derive_seed(seed, i));
    draw.positive[i] = rng.uniform01() < params.positive_rate;
    draw.z[i] = rng.normal();
  }
  return draw;
}

struct Rates {
  double accuracy = 0.0;
  double yes_rate = 0.0;
};

// Vanilla greedy on {g/2, -g/2} answers yes iff g > 0 (a tie goes to "no").
Rates greedy_rates(const CalibrationDraw& draw, const std::array<double, 3>& x, double sigma) {
  std::size_t correct = 0;
  std::size_t yes = 0;
  for (std::size_t i = 0; i < draw.z.size(); ++i) {
    const bool positive = draw.positive[i] != 0;
    const double gap = (positive ? x[0] : x[1]) + x[2] + sigma * draw.z[i];
    const bool says_yes = gap > 0.0;
    yes += says_yes;
    correct += says_yes == positive;
  }
  const double n = static_cast<double>(draw.z.size());
  return {static_cast<double>(correct) / n, static_cast<double>(yes) / n};
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double inverse_normal_cdf(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (standard_normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Rates held_out_rates(const GeneratorParams& params) {
  const auto records = generate(params);
  const auto preds = run_pipeline_all(records, PipelineSpec{});
  const EvalReport report = evaluate(preds);
  return {report.accuracy, report.yes_rate};
}

}  // namespace

GeneratorParams calibrate(const CalibrationTarget& target, const GeneratorParams& base) {
  target.validate();
  base.validate();
  const double pi = base.positive_rate;
  const double ta = target.target_accuracy;
  const double ty = target.target_yes_rate;

  auto residuals_of = [&](const Rates& r) {
    return std::pair{r.accuracy - ta, r.yes_rate - ty};
  };

  // acc = pi*TPR + (1-pi)*(1-FPR), yes = pi*TPR + (1-pi)*FPR.
  double tpr = 0.5;
  double fpr = 0.5;
  bool feasible = ta >= std::max(pi, 1.0 - pi);
  if (pi > 0.0) {
    tpr = (ta + ty - 1.0 + pi) / (2.0 * pi);
    feasible = feasible && tpr >= 0.0 && tpr <= 1.0;
  }
  if (pi < 1.0) {
    fpr = (ty - ta + 1.0 - pi) / (2.0 * (1.0 - pi));
    feasible = feasible && fpr >= 0.0 && fpr <= 1.0;
  }
  if (!feasible) {
    const auto [ra, ry] = residuals_of(held_out_rates(base));
    throw CalibrationFailed("infeasible target for positive_rate " + std::to_string(pi), ra, ry);
  }

  const double sigma = base.sigma;
  static constexpr double kRateClamp = 1e-6;
  auto clamp_rate = [](double r) { return std::clamp(r, kRateClamp, 1.0 - kRateClamp); };
  std::array<double, 3> x{base.mu_pos, base.mu_neg, base.skew_delta};
  if (pi > 0.0) x[0] = sigma * inverse_normal_cdf(clamp_rate(tpr)) - base.skew_delta;
  if (pi < 1.0) x[1] = sigma * inverse_normal_cdf(clamp_rate(fpr)) - base.skew_delta;

  const CalibrationDraw draw = draw_base_noise(base, derive_seed(base.seed, kCalibrationSalt));
  auto loss = [&](const std::array<double, 3>& y) {
    const auto [ra, ry] = residuals_of(greedy_rates(draw, y, sigma));
    return ra * ra + ry * ry;
  };

  double best = loss(x);
  double step = 0.25 * sigma;
  for (int sweep = 0; sweep < kCalibrationSweepBudget && step >= 1e-4 * sigma; ++sweep) {
    bool improved = false;
    for (std::size_t k = 0; k < x.size() && !improved; ++k) {
      for (double sign : {1.0, -1.0}) {
        auto y = x;
        y[k] += sign * step;
        const double l = loss(y);
        if (l < best) {
          best = l;
          x = y;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  GeneratorParams out = base;
  out.mu_pos = x[0];
  out.mu_neg = x[1];
  out.skew_delta = x[2];
  const auto [ra, ry] = residuals_of(held_out_rates(out));
  if (std::abs(ra) > target.tolerance || std::abs(ry) > target.tolerance) {
    throw CalibrationFailed("held-out draw misses the target after " +
                                std::to_string(kCalibrationSweepBudget) + " sweeps",
                            ra, ry);
  }
  return out;
}

json to_json(const Preset& preset) {
  json j;
  j["name"] = preset.name;
  j["target"] = {{"target_accuracy", preset.target.target_accuracy},
                 {"target_yes_rate", preset.target.target_yes_rate},
                 {"tolerance", preset.target.tolerance}};
  j["labels"] = {{"dataset", preset.labels.dataset},
                 {"category", preset.labels.category},
                 {"id_prefix", preset.labels.id_prefix}};
  j["params"] = to_json(preset.params);
  return j;
}

Preset preset_from_json(const json& j) {
  reject_unknown_keys(j, {"name", "target", "labels", "params"}, "preset");
  Preset preset;
  preset.name = read_string(j, "name", "");
  if (auto it = j.find("target"); it != j.end()) {
    reject_unknown_keys(*it, {"target_accuracy", "target_yes_rate", "tolerance"}, "preset.target");
    preset.target.target_accuracy = read_number(*it, "target_accuracy", 0.0);
    preset.target.target_yes_rate = read_number(*it, "target_yes_rate", 0.0);
    preset.target.tolerance = read_number(*it, "tolerance", preset.target.tolerance);
    preset.target.validate();
  }
  if (auto it = j.find("labels"); it != j.end()) {
    reject_unknown_keys(*it, {"dataset", "category", "id_prefix"}, "preset.labels");
    preset.labels.dataset = read_string(*it, "dataset", preset.labels.dataset);
    preset.labels.category = read_string(*it, "category", preset.labels.category);
    preset.labels.id_prefix = read_string(*it, "id_prefix", preset.labels.id_prefix);
  }
  auto params = j.find("params");
  if (params == j.end()) throw Error(ErrorCode::kInvalidArgument, "preset lacks 'params'");
  preset.params = generator_params_from_json(*params);
  return preset;
}

const std::vector<Preset>& builtin_preset_definitions() {
  static const std::vector<Preset> presets = [] {
    GeneratorParams base;
    base.n_records = 20000;
    base.positive_rate = 0.5;
    base.sigma = 4.0;
    base.contrast_shift = 2.0;
    base.contrast_sigma = 2.0;
    base.pba_shift = 2.0;

    Preset coco{"coco-random", {0.871, 0.392, 0.03}, {"coco-synthetic", "random", "coco-random"}, base};
    coco.params.seed = 1001;
    Preset gqa{"gqa-adversarial",
               {0.809, 0.540, 0.03},
               {"gqa-synthetic", "adversarial", "gqa-adversarial"},
               base};
    gqa.params.seed = 2002;
    return std::vector<Preset>{coco, gqa};
  }();
  return presets;
}

const Preset* find_builtin_preset(std::string_view name) {
  for (const auto& p : builtin_preset_definitions()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Preset calibrate_preset(const Preset& definition) {
  Preset out = definition;
  out.params = calibrate(definition.target, definition.params);
  return out;
}

}  // namespace decode_lab
