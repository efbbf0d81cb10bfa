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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "decode_lab/pipeline.h"
#include "decode_lab/prediction.h"
#include "decode_lab/trace.h"

namespace decode_lab {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  // Predictions that are neither yes nor no; always counted as incorrect.
  std::size_t other = 0;

  std::size_t total() const { return tp + fp + tn + fn + other; }
  bool operator==(const Confusion&) const = default;
};

// POPE binary-QA metrics. Precision and recall are 0 when their denominator
// is 0; f1 is 0 when precision + recall is 0.
struct EvalReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double yes_rate = 0.0;
  Confusion confusion;

  bool operator==(const EvalReport&) const = default;
};

EvalReport report_from_confusion(const Confusion& c);

// Throws EmptyInput.
EvalReport evaluate(std::span<const PredictionRecord> preds);

// Transitions from `before` to `after`, aligned by id.
//
// The headline view is the predicted-label flips (neg_to_pos, pos_to_neg).
// The correctness 2x2 (right/wrong before x after) is an extension of this
// lab; label_transitions is the full 3x3 over {yes, no, other}.
struct TransferMatrix {
  std::size_t n = 0;
  std::size_t right_to_right = 0;
  std::size_t right_to_wrong = 0;
  std::size_t wrong_to_right = 0;
  std::size_t wrong_to_wrong = 0;
  std::size_t neg_to_pos = 0;
  std::size_t pos_to_neg = 0;
  // [before][after], indexed by Answer.
  std::array<std::array<std::size_t, 3>, 3> label_transitions{};

  // (wrong_to_right - right_to_wrong) / n
  double accuracy_delta() const;

  bool operator==(const TransferMatrix&) const = default;
};

// Throws IdMismatch listing the symmetric difference of the id sets, or
// InvalidArgument when an id repeats inside one set.
TransferMatrix transfer_analysis(std::span<const PredictionRecord> before,
                                 std::span<const PredictionRecord> after);

struct ComparisonRow {
  std::string name;
  PipelineSpec spec;
  EvalReport report;
};

// rows[0] is the baseline; transfers[i] maps rows[0] -> rows[i + 1].
struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::vector<TransferMatrix> transfers;
};

ComparisonTable compare_pipelines(std::span<const TraceRecord> traces,
                                  std::span<const PipelineSpec> specs);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const TransferMatrix& matrix);
nlohmann::json to_json(const ComparisonTable& table);

// Columns: method, accuracy, f1, yes_rate (percentages, one decimal).
std::string to_markdown(const ComparisonTable& table);
std::string to_csv(const ComparisonTable& table);

}  // namespace decode_lab
