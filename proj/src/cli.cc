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

#include "decode_lab/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "decode_lab/diagnostics.h"
#include "decode_lab/error.h"
#include "decode_lab/evaluation.h"
#include "decode_lab/generator.h"
#include "decode_lab/io_util.h"
#include "decode_lab/pipeline.h"
#include "decode_lab/prediction_io.h"
#include "decode_lab/trace.h"

#ifndef DECODE_LAB_PRESET_DIR
#define DECODE_LAB_PRESET_DIR "presets"
#endif

namespace decode_lab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_input(const std::string& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kInvalidArgument, "input file '" + path + "' does not exist");
  }
}

void require_output(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw Error(ErrorCode::kInvalidArgument,
                "output directory '" + parent.string() + "' does not exist");
  }
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "'" + item + "' is not a number");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty number list");
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string percent(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * v);
  return buf;
}

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void write_json(const std::string& path, const json& j) {
  atomic_write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// gen / calibrate

struct GeneratorFlags {
  std::string preset;
  std::string preset_dir = DECODE_LAB_PRESET_DIR;
  std::string config;
  std::size_t n = 0;
  double positive_rate = 0, mu_pos = 0, mu_neg = 0, sigma = 0, skew_delta = 0;
  double contrast_shift = 0, contrast_sigma = 0, pba_shift = 0;
  std::uint64_t seed = 0;
  std::string dataset, category, id_prefix;
  std::vector<std::pair<CLI::Option*, std::function<void(GeneratorParams&, TraceLabels&)>>>
      overrides;

  void attach(CLI::App* app) {
    app->add_option("--preset-dir", preset_dir, "Directory holding preset files");
    app->add_option("--config", config, "GeneratorParams JSON file");
    auto flag = [&](const char* name, auto& target, const char* help, auto apply) {
      overrides.emplace_back(app->add_option(name, target, help), apply);
    };
    flag("--n", n, "Number of records", [this](auto& p, auto&) { p.n_records = n; });
    flag("--positive-rate", positive_rate, "Fraction of yes-labelled records",
         [this](auto& p, auto&) { p.positive_rate = positive_rate; });
    flag("--mu-pos", mu_pos, "Mean gap for yes-labelled records",
         [this](auto& p, auto&) { p.mu_pos = mu_pos; });
    flag("--mu-neg", mu_neg, "Mean gap for no-labelled records",
         [this](auto& p, auto&) { p.mu_neg = mu_neg; });
    flag("--sigma", sigma, "Gap noise", [this](auto& p, auto&) { p.sigma = sigma; });
    flag("--skew-delta", skew_delta, "Global gap offset",
         [this](auto& p, auto&) { p.skew_delta = skew_delta; });
    flag("--contrast-shift", contrast_shift, "Contrast gap shift toward no",
         [this](auto& p, auto&) { p.contrast_shift = contrast_shift; });
    flag("--contrast-sigma", contrast_sigma, "Extra noise on contrast gaps",
         [this](auto& p, auto&) { p.contrast_sigma = contrast_sigma; });
    flag("--pba-shift", pba_shift, "Gap boost of the pba variant",
         [this](auto& p, auto&) { p.pba_shift = pba_shift; });
    flag("--seed", seed, "Generator seed", [this](auto& p, auto&) { p.seed = seed; });
    flag("--dataset", dataset, "Dataset label", [this](auto&, auto& l) { l.dataset = dataset; });
    flag("--category", category, "Category label",
         [this](auto&, auto& l) { l.category = category; });
    flag("--id-prefix", id_prefix, "Record id prefix",
         [this](auto&, auto& l) { l.id_prefix = id_prefix; });
  }

  void apply_overrides(GeneratorParams& params, TraceLabels& labels) const {
    for (const auto& [opt, apply] : overrides) {
      if (opt->count() > 0) apply(params, labels);
    }
  }
};

fs::path resolve_preset_path(const std::string& preset, const std::string& preset_dir) {
  if (fs::is_regular_file(preset)) return preset;
  fs::path candidate = fs::path(preset_dir) / (preset + ".json");
  if (fs::is_regular_file(candidate)) return candidate;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown preset '" + preset + "' (looked in '" + preset_dir + "')");
}

struct GenOptions {
  GeneratorFlags flags;
  std::string output;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
  GeneratorParams params;
  TraceLabels labels;
  if (!o.flags.preset.empty()) {
    const Preset preset =
        preset_from_json(read_json_file(resolve_preset_path(o.flags.preset, o.flags.preset_dir)));
    params = preset.params;
    labels = preset.labels;
  }
  if (!o.flags.config.empty()) {
    require_input(o.flags.config);
    params = generator_params_from_json(read_json_file(o.flags.config));
  }
  o.flags.apply_overrides(params, labels);
  params.validate();
  require_output(o.output);
  const auto records = generate(params, labels);
  write_traces(records, synthetic_meta(params), o.output);
  out << "wrote " << records.size() << " records to " << o.output << "\n";
  return kExitOk;
}

struct CalibrateOptions {
  GeneratorFlags flags;
  std::string name;
  double target_accuracy = 0, target_yes_rate = 0, tolerance = 0.03;
  CLI::Option* target_accuracy_opt = nullptr;
  CLI::Option* target_yes_rate_opt = nullptr;
  CLI::Option* tolerance_opt = nullptr;
  std::string output;
};

int cmd_calibrate(const CalibrateOptions& o, std::ostream& out) {
  Preset preset;
  if (!o.flags.preset.empty()) {
    const Preset* builtin = find_builtin_preset(o.flags.preset);
    if (builtin == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "no built-in preset '" + o.flags.preset + "'");
    }
    preset = *builtin;
  } else {
    preset.name = o.name.empty() ? "custom" : o.name;
    if (o.target_accuracy_opt->count() == 0 || o.target_yes_rate_opt->count() == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--target-accuracy and --target-yes-rate are required without --preset");
    }
  }
  if (!o.flags.config.empty()) {
    require_input(o.flags.config);
    preset.params = generator_params_from_json(read_json_file(o.flags.config));
  }
  if (!o.name.empty()) preset.name = o.name;
  if (o.target_accuracy_opt->count() > 0) preset.target.target_accuracy = o.target_accuracy;
  if (o.target_yes_rate_opt->count() > 0) preset.target.target_yes_rate = o.target_yes_rate;
  if (o.tolerance_opt->count() > 0) preset.target.tolerance = o.tolerance;
  o.flags.apply_overrides(preset.params, preset.labels);
  preset.target.validate();
  preset.params.validate();
  require_output(o.output);
  const Preset calibrated = calibrate_preset(preset);
  write_json(o.output, to_json(calibrated));
  out << "calibrated '" << calibrated.name << "' -> " << o.output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// decode / compare

struct PipelineFlags {
  std::string method = "none";
  std::string variant_original;
  std::string variant_contrast;
  double alpha = 1.0, lambda = 1.0, beta = 0.5, tau = 0.2;
  bool apc = false, olm = false;
  std::string strategy;
  std::uint64_t seed = 0;
  std::string name;
  CLI::Option *method_opt, *variant_original_opt, *variant_contrast_opt, *alpha_opt, *lambda_opt,
      *beta_opt, *tau_opt, *strategy_opt, *seed_opt, *name_opt;

  void attach(CLI::App* app, bool single) {
    if (single) {
      method_opt = app->add_option("--method", method, "none | vcd | icd | sid");
      variant_original_opt =
          app->add_option("--variant-original", variant_original, "Variant to decode");
      variant_contrast_opt =
          app->add_option("--variant-contrast", variant_contrast, "Contrast variant");
      strategy_opt = app->add_option("--strategy", strategy, "greedy | sample");
      name_opt = app->add_option("--name", name, "Label for the pipeline");
      app->add_flag("--apc", apc, "Enable the plausibility constraint (default beta)");
      app->add_flag("--olm", olm, "Enable the output-layer override (default tau)");
    }
    alpha_opt = app->add_option("--alpha", alpha, "VCD/SID amplification");
    lambda_opt = app->add_option("--lambda", lambda, "ICD penalty");
    beta_opt = app->add_option("--beta", beta, "Plausibility threshold");
    tau_opt = app->add_option("--tau", tau, "OLM threshold");
    seed_opt = app->add_option("--seed", seed, "Global sampling seed");
  }

  // Applies explicitly given flags on top of `spec`.
  void apply(PipelineSpec& spec) const {
    if (method_opt->count() > 0) {
      if (method == "none") {
        spec.contrast.reset();
        spec.variant_contrast.reset();
      } else {
        ContrastParams params;
        params.method = parse_contrast_method(method);
        params.alpha = alpha;
        params.lambda = lambda;
        spec.contrast = params;
        spec.variant_contrast = method;
      }
    }
    if (spec.contrast) {
      if (alpha_opt->count() > 0) spec.contrast->alpha = alpha;
      if (lambda_opt->count() > 0) spec.contrast->lambda = lambda;
    }
    if (variant_contrast_opt->count() > 0) spec.variant_contrast = variant_contrast;
    if (variant_original_opt->count() > 0) spec.variant_original = variant_original;
    if (beta_opt->count() > 0 || apc) spec.apc = ApcParams{beta};
    if (tau_opt->count() > 0 || olm) spec.olm = OlmParams{tau};
    if (strategy_opt->count() > 0) spec.strategy = parse_strategy(strategy);
    if (seed_opt->count() > 0) spec.global_seed = seed;
    if (name_opt->count() > 0) spec.name = name;
  }
};

struct DecodeOptions {
  std::string input, output, config;
  PipelineFlags pipeline;
};

int cmd_decode(const DecodeOptions& o, std::ostream& out) {
  require_input(o.input);
  require_output(o.output);
  PipelineSpec spec;
  if (!o.config.empty()) {
    require_input(o.config);
    spec = pipeline_spec_from_json(read_json_file(o.config));
  }
  o.pipeline.apply(spec);
  spec.validate();
  const TraceFile traces = read_traces(o.input);
  const auto preds = run_pipeline_all(traces.records, spec);
  json header = {{"pipeline", to_json(spec)}, {"name", spec.display_name()}, {"traces", o.input}};
  write_predictions(o.output, header, preds);
  out << "decoded " << preds.size() << " records with " << spec.display_name() << " -> "
      << o.output << "\n";
  return kExitOk;
}

// Named configurations for `compare --pipelines`.
PipelineSpec builtin_pipeline(const std::string& name, const PipelineFlags& f) {
  PipelineSpec spec;
  spec.global_seed = f.seed;
  auto with_contrast = [&](ContrastMethod method, const char* variant) {
    spec.contrast = ContrastParams{method, f.alpha, f.lambda};
    spec.variant_contrast = variant;
  };
  auto contrast_method = [&](const std::string& base) -> bool {
    if (base == "vcd") with_contrast(ContrastMethod::kVcd, "vcd");
    else if (base == "icd") with_contrast(ContrastMethod::kIcd, "icd");
    else if (base == "sid") with_contrast(ContrastMethod::kSid, "sid");
    else return false;
    return true;
  };
  if (name == "greedy") {
  } else if (name == "sample") {
    spec.strategy = Strategy::kSample;
  } else if (name == "sample-apc") {
    spec.strategy = Strategy::kSample;
    spec.apc = ApcParams{f.beta};
  } else if (name == "pba") {
    spec.variant_original = std::string(kPbaVariant);
  } else if (name == "olm") {
    spec.olm = OlmParams{f.tau};
  } else if (contrast_method(name)) {
  } else if (name.size() > 7 && name.ends_with("-sample") &&
             contrast_method(name.substr(0, name.size() - 7))) {
    spec.strategy = Strategy::kSample;
    spec.apc = ApcParams{f.beta};
  } else if (name.size() > 4 && name.ends_with("-apc") &&
             contrast_method(name.substr(0, name.size() - 4))) {
    spec.apc = ApcParams{f.beta};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown pipeline '" + name + "'");
  }
  spec.validate();
  return spec;
}

std::vector<PipelineSpec> specs_from_config(const json& j) {
  const json* list = &j;
  if (j.is_object()) {
    reject_unknown_keys(j, {"pipelines"}, "compare config");
    auto it = j.find("pipelines");
    if (it == j.end()) throw Error(ErrorCode::kInvalidArgument, "compare config lacks 'pipelines'");
    list = &*it;
  }
  if (!list->is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "compare config must list PipelineSpec objects");
  }
  std::vector<PipelineSpec> specs;
  for (const auto& item : *list) specs.push_back(pipeline_spec_from_json(item));
  return specs;
}

struct CompareOptions {
  std::string input, output, config;
  std::string pipelines = "greedy,vcd,sample-apc";
  PipelineFlags knobs;
};

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  require_input(o.input);
  require_output(o.output + ".json");
  std::vector<PipelineSpec> specs;
  if (!o.config.empty()) {
    require_input(o.config);
    specs = specs_from_config(read_json_file(o.config));
  } else {
    for (const auto& name : split_names(o.pipelines)) {
      specs.push_back(builtin_pipeline(name, o.knobs));
      if (specs.back().name.empty()) specs.back().name = name;
    }
  }
  if (specs.empty()) throw Error(ErrorCode::kInvalidArgument, "no pipelines to compare");
  const TraceFile traces = read_traces(o.input);
  const ComparisonTable table = compare_pipelines(traces.records, specs);
  const std::string markdown = to_markdown(table);
  write_json(o.output + ".json", {{"input", o.input}, {"comparison", to_json(table)}});
  atomic_write_text(o.output + ".md", markdown);
  atomic_write_text(o.output + ".csv", to_csv(table));
  out << markdown;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string predictions, baseline, output;
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  require_input(o.predictions);
  if (!o.baseline.empty()) require_input(o.baseline);
  if (!o.output.empty()) require_output(o.output);
  const PredictionFile file = read_predictions(o.predictions);
  const EvalReport report = evaluate(file.records);
  json result = {{"predictions", o.predictions}, {"report", to_json(report)}};
  out << "| metric | value |\n|---|---|\n"
      << "| n | " << report.n << " |\n"
      << "| accuracy | " << percent(report.accuracy) << " |\n"
      << "| precision | " << percent(report.precision) << " |\n"
      << "| recall | " << percent(report.recall) << " |\n"
      << "| f1 | " << percent(report.f1) << " |\n"
      << "| yes_rate | " << percent(report.yes_rate) << " |\n";
  if (!o.baseline.empty()) {
    const PredictionFile base = read_predictions(o.baseline);
    const TransferMatrix m = transfer_analysis(base.records, file.records);
    result["baseline"] = o.baseline;
    result["transfer"] = to_json(m);
    out << "\nno->yes " << m.neg_to_pos << ", yes->no " << m.pos_to_neg << ", wrong->right "
        << m.wrong_to_right << ", right->wrong " << m.right_to_wrong << "\n";
  }
  if (!o.output.empty()) write_json(o.output, result);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseApcOptions {
  std::string input, output;
  std::string betas = "0.1,0.5,1.0";
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
};

int cmd_diagnose_apc(const DiagnoseApcOptions& o, std::ostream& out) {
  require_input(o.input);
  require_output(o.output + ".json");
  std::vector<double> betas = parse_double_list(o.betas);
  std::sort(betas.begin(), betas.end());
  for (double b : betas) ApcParams{b}.validate();
  if (o.replicates < 1) throw Error(ErrorCode::kInvalidArgument, "--replicates must be >= 1");
  const TraceFile traces = read_traces(o.input);
  json reports = json::array();
  std::string md = "| beta | singleton_fraction | greedy_agreement | survivor sizes |\n|---|---|---|---|\n";
  bool monotone = true;
  double previous = -1.0;
  for (double beta : betas) {
    const auto r = analyze_apc(traces.records, ApcParams{beta}, o.replicates, o.seed);
    monotone = monotone && r.greedy_agreement >= previous;
    previous = r.greedy_agreement;
    reports.push_back(to_json(r));
    std::string hist;
    for (const auto& [size, count] : r.survivor_histogram) {
      if (!hist.empty()) hist += ", ";
      hist += std::to_string(size) + ":" + std::to_string(count);
    }
    md += "| " + fixed(beta, 3) + " | " + fixed(r.singleton_fraction) + " | " +
          fixed(r.greedy_agreement) + " | " + hist + " |\n";
  }
  md += std::string("\nagreement monotone in beta: ") + (monotone ? "yes" : "no") + "\n";
  write_json(o.output + ".json", {{"input", o.input},
                                  {"replicates", o.replicates},
                                  {"seed", o.seed},
                                  {"reports", reports},
                                  {"monotone_in_beta", monotone}});
  atomic_write_text(o.output + ".md", md);
  out << md;
  return kExitOk;
}

struct DiagnoseShiftOptions {
  std::string input, output;
  std::string variant = "vcd";
  std::string method;
  double alpha = 1.0, lambda = 1.0;
};

int cmd_diagnose_shift(const DiagnoseShiftOptions& o, std::ostream& out) {
  require_input(o.input);
  require_output(o.output + ".json");
  ContrastParams params;
  params.method = parse_contrast_method(o.method.empty() ? o.variant : o.method);
  params.alpha = o.alpha;
  params.lambda = o.lambda;
  params.validate();
  const TraceFile traces = read_traces(o.input);
  const ShiftReport r = analyze_shift(traces.records, o.variant, params);
  const json params_json = {{"method", std::string(to_string(params.method))},
                            {"alpha", params.alpha},
                            {"lambda", params.lambda}};
  write_json(o.output + ".json", {{"input", o.input},
                                  {"variant", o.variant},
                                  {"params", params_json},
                                  {"report", to_json(r)}});
  std::string md = "| quantity | value |\n|---|---|\n";
  md += "| n | " + std::to_string(r.n) + " |\n";
  md += "| mean gap delta | " + fixed(r.mean_gap_delta) + " |\n";
  md += "| yes_rate before | " + percent(r.yes_rate_before) + " |\n";
  md += "| yes_rate after | " + percent(r.yes_rate_after) + " |\n";
  md += "| contrast more no-biased | " + percent(r.fraction_contrast_no_biased) + " |\n";
  atomic_write_text(o.output + ".md", md);
  out << md;
  return kExitOk;
}

struct DiagnoseContrastOptions {
  std::string input, output;
  std::string variant = "vcd";
};

int cmd_diagnose_contrast(const DiagnoseContrastOptions& o, std::ostream& out) {
  require_input(o.input);
  require_output(o.output + ".json");
  const TraceFile traces = read_traces(o.input);
  const EvalReport vanilla = contrast_only_eval(traces.records, kOriginalVariant);
  const EvalReport contrast = contrast_only_eval(traces.records, o.variant);
  write_json(o.output + ".json", {{"input", o.input},
                                  {"variant", o.variant},
                                  {"vanilla", to_json(vanilla)},
                                  {"contrast_only", to_json(contrast)}});
  std::string md = "| method | accuracy | f1 | yes_rate |\n|---|---|---|---|\n";
  md += "| greedy | " + percent(vanilla.accuracy) + " | " + percent(vanilla.f1) + " | " +
        percent(vanilla.yes_rate) + " |\n";
  md += "| " + o.variant + "-only | " + percent(contrast.accuracy) + " | " +
        percent(contrast.f1) + " | " + percent(contrast.yes_rate) + " |\n";
  atomic_write_text(o.output + ".md", md);
  out << md;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contrastive decoding laboratory for binary-QA logit traces", "decode_lab"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic traces");
  gen_cmd->add_option("--preset", gen.flags.preset, "Preset name or preset file");
  gen.flags.attach(gen_cmd);
  gen_cmd->add_option("-o,--output", gen.output, "Trace file to write")->required();

  CalibrateOptions cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit generator params to a target regime");
  cal_cmd->add_option("--preset", cal.flags.preset, "Built-in preset definition");
  cal.flags.attach(cal_cmd);
  cal_cmd->add_option("--name", cal.name, "Preset name to record");
  cal.target_accuracy_opt =
      cal_cmd->add_option("--target-accuracy", cal.target_accuracy, "Target greedy accuracy");
  cal.target_yes_rate_opt =
      cal_cmd->add_option("--target-yes-rate", cal.target_yes_rate, "Target greedy yes-rate");
  cal.tolerance_opt = cal_cmd->add_option("--tolerance", cal.tolerance, "Allowed residual");
  cal_cmd->add_option("-o,--output", cal.output, "Preset file to write")->required();

  DecodeOptions dec;
  auto* dec_cmd = app.add_subcommand("decode", "Apply one pipeline to a trace file");
  dec_cmd->add_option("-i,--input", dec.input, "Trace file")->required();
  dec_cmd->add_option("-o,--output", dec.output, "Predictions file to write")->required();
  dec_cmd->add_option("--config", dec.config, "PipelineSpec JSON file");
  dec.pipeline.attach(dec_cmd, true);

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score a predictions file");
  eval_cmd->add_option("-p,--predictions", ev.predictions, "Predictions file")->required();
  eval_cmd->add_option("--baseline", ev.baseline, "Baseline predictions for transfer analysis");
  eval_cmd->add_option("-o,--output", ev.output, "JSON report to write");

  CompareOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Evaluate several pipelines side by side");
  cmp_cmd->add_option("-i,--input", cmp.input, "Trace file")->required();
  cmp_cmd->add_option("-o,--output", cmp.output, "Output prefix (.json/.md/.csv)")->required();
  cmp_cmd->add_option("--config", cmp.config, "JSON list of PipelineSpec objects");
  cmp_cmd->add_option("--pipelines", cmp.pipelines,
                      "Comma list of: greedy, sample, sample-apc, pba, olm, vcd, icd, sid, "
                      "<method>-apc, <method>-sample");
  cmp.knobs.attach(cmp_cmd, false);

  auto* diag_cmd = app.add_subcommand("diagnose", "Mechanism-level analyzers");
  diag_cmd->require_subcommand(1);

  DiagnoseApcOptions dapc;
  auto* apc_cmd = diag_cmd->add_subcommand("apc", "Sampling-to-greedy degradation under APC");
  apc_cmd->add_option("-i,--input", dapc.input, "Trace file")->required();
  apc_cmd->add_option("-o,--output", dapc.output, "Output prefix (.json/.md)")->required();
  apc_cmd->add_option("--beta", dapc.betas, "Comma list of beta values");
  apc_cmd->add_option("--replicates", dapc.replicates, "Seed replicates per record");
  apc_cmd->add_option("--seed", dapc.seed, "Base seed");

  DiagnoseShiftOptions dshift;
  auto* shift_cmd = diag_cmd->add_subcommand("shift", "Logit-gap shift of a contrast method");
  shift_cmd->add_option("-i,--input", dshift.input, "Trace file")->required();
  shift_cmd->add_option("-o,--output", dshift.output, "Output prefix (.json/.md)")->required();
  shift_cmd->add_option("--variant", dshift.variant, "Contrast variant");
  shift_cmd->add_option("--method", dshift.method, "vcd | icd | sid (default: variant name)");
  shift_cmd->add_option("--alpha", dshift.alpha, "VCD/SID amplification");
  shift_cmd->add_option("--lambda", dshift.lambda, "ICD penalty");

  DiagnoseContrastOptions dcon;
  auto* con_cmd = diag_cmd->add_subcommand("contrast-only", "Greedy on the contrast variant alone");
  con_cmd->add_option("-i,--input", dcon.input, "Trace file")->required();
  con_cmd->add_option("-o,--output", dcon.output, "Output prefix (.json/.md)")->required();
  con_cmd->add_option("--variant", dcon.variant, "Contrast variant");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (cal_cmd->parsed()) return cmd_calibrate(cal, out);
    if (dec_cmd->parsed()) return cmd_decode(dec, out);
    if (eval_cmd->parsed()) return cmd_eval(ev, out);
    if (cmp_cmd->parsed()) return cmd_compare(cmp, out);
    if (apc_cmd->parsed()) return cmd_diagnose_apc(dapc, out);
    if (shift_cmd->parsed()) return cmd_diagnose_shift(dshift, out);
    if (con_cmd->parsed()) return cmd_diagnose_contrast(dcon, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << "error: no command\n";
  return kExitValidation;
}

}  // namespace decode_lab
