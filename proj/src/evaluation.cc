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

#include "decode_lab/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <unordered_map>

#include "decode_lab/error.h"

namespace decode_lab {

using nlohmann::json;

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t index_of(Answer a) { return static_cast<std::size_t>(a); }

}  // namespace

EvalReport report_from_confusion(const Confusion& c) {
  EvalReport r;
  r.confusion = c;
  r.n = c.total();
  r.accuracy = ratio(c.tp + c.tn, r.n);
  r.yes_rate = ratio(c.tp + c.fp, r.n);
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  const double pr = r.precision + r.recall;
  r.f1 = pr > 0 ? 2 * r.precision * r.recall / pr : 0.0;
  return r;
}

EvalReport evaluate(std::span<const PredictionRecord> preds) {
  if (preds.empty()) throw Error(ErrorCode::kEmptyInput, "no predictions to evaluate");
  Confusion c;
  for (const auto& p : preds) {
    const bool positive = p.label == Answer::kYes;
    switch (p.predicted) {
      case Answer::kYes: (positive ? c.tp : c.fp) += 1; break;
      case Answer::kNo: (positive ? c.fn : c.tn) += 1; break;
      case Answer::kOther: c.other += 1; break;
    }
  }
  return report_from_confusion(c);
}

double TransferMatrix::accuracy_delta() const {
  if (n == 0) return 0.0;
  return (static_cast<double>(wrong_to_right) - static_cast<double>(right_to_wrong)) /
         static_cast<double>(n);
}

TransferMatrix transfer_analysis(std::span<const PredictionRecord> before,
                                 std::span<const PredictionRecord> after) {
  std::unordered_map<std::string_view, const PredictionRecord*> by_id;
  by_id.reserve(before.size());
  for (const auto& p : before) {
    if (!by_id.emplace(p.id, &p).second) {
      throw Error(ErrorCode::kInvalidArgument, "id '" + p.id + "' repeats in 'before'");
    }
  }
  std::set<std::string> missing;
  std::set<std::string_view> seen_after;
  TransferMatrix m;
  for (const auto& a : after) {
    if (!seen_after.insert(a.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "id '" + a.id + "' repeats in 'after'");
    }
    auto it = by_id.find(a.id);
    if (it == by_id.end()) {
      missing.insert(a.id);
      continue;
    }
    const PredictionRecord& b = *it->second;
    ++m.n;
    const bool right_before = b.correct();
    const bool right_after = a.correct();
    if (right_before && right_after) ++m.right_to_right;
    if (right_before && !right_after) ++m.right_to_wrong;
    if (!right_before && right_after) ++m.wrong_to_right;
    if (!right_before && !right_after) ++m.wrong_to_wrong;
    ++m.label_transitions[index_of(b.predicted)][index_of(a.predicted)];
  }
  for (const auto& b : before) {
    if (!seen_after.contains(b.id)) missing.insert(b.id);
  }
  if (!missing.empty()) throw IdMismatch(std::vector<std::string>(missing.begin(), missing.end()));
  m.neg_to_pos = m.label_transitions[index_of(Answer::kNo)][index_of(Answer::kYes)];
  m.pos_to_neg = m.label_transitions[index_of(Answer::kYes)][index_of(Answer::kNo)];
  return m;
}

ComparisonTable compare_pipelines(std::span<const TraceRecord> traces,
                                  std::span<const PipelineSpec> specs) {
  if (specs.empty()) throw Error(ErrorCode::kInvalidArgument, "compare needs at least one spec");
  ComparisonTable table;
  std::vector<PredictionRecord> baseline;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto preds = run_pipeline_all(traces, specs[i]);
    table.rows.push_back({specs[i].display_name(), specs[i], evaluate(preds)});
    if (i == 0) {
      baseline = std::move(preds);
    } else {
      table.transfers.push_back(transfer_analysis(baseline, preds));
    }
  }
  return table;
}

json to_json(const EvalReport& r) {
  return {{"n", r.n},
          {"accuracy", r.accuracy},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"yes_rate", r.yes_rate},
          {"confusion",
           {{"TP", r.confusion.tp},
            {"FP", r.confusion.fp},
            {"TN", r.confusion.tn},
            {"FN", r.confusion.fn},
            {"other", r.confusion.other}}}};
}

json to_json(const TransferMatrix& m) {
  json labels = json::object();
  for (Answer from : {Answer::kYes, Answer::kNo, Answer::kOther}) {
    json row = json::object();
    for (Answer to : {Answer::kYes, Answer::kNo, Answer::kOther}) {
      row[std::string(to_string(to))] = m.label_transitions[index_of(from)][index_of(to)];
    }
    labels[std::string(to_string(from))] = row;
  }
  return {{"n", m.n},
          {"neg_to_pos", m.neg_to_pos},
          {"pos_to_neg", m.pos_to_neg},
          {"correctness",
           {{"right_to_right", m.right_to_right},
            {"right_to_wrong", m.right_to_wrong},
            {"wrong_to_right", m.wrong_to_right},
            {"wrong_to_wrong", m.wrong_to_wrong}}},
          {"label_transitions", labels},
          {"accuracy_delta", m.accuracy_delta()}};
}

json to_json(const ComparisonTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"name", row.name}, {"spec", to_json(row.spec)}, {"report", to_json(row.report)}});
  }
  json transfers = json::array();
  for (std::size_t i = 0; i < table.transfers.size(); ++i) {
    transfers.push_back({{"baseline", table.rows[0].name},
                         {"method", table.rows[i + 1].name},
                         {"matrix", to_json(table.transfers[i])}});
  }
  return {{"rows", rows}, {"transfers", transfers}};
}

namespace {

std::string percent(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_markdown(const ComparisonTable& table) {
  std::string out = "| method | accuracy | f1 | yes_rate |\n|---|---|---|---|\n";
  for (const auto& row : table.rows) {
    out += "| " + row.name + " | " + percent(row.report.accuracy) + " | " +
           percent(row.report.f1) + " | " + percent(row.report.yes_rate) + " |\n";
  }
  if (!table.transfers.empty()) {
    out += "\n| transfer vs " + table.rows[0].name +
           " | no->yes | yes->no | wrong->right | right->wrong |\n|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < table.transfers.size(); ++i) {
      const auto& m = table.transfers[i];
      out += "| " + table.rows[i + 1].name + " | " + std::to_string(m.neg_to_pos) + " | " +
             std::to_string(m.pos_to_neg) + " | " + std::to_string(m.wrong_to_right) + " | " +
             std::to_string(m.right_to_wrong) + " |\n";
    }
  }
  return out;
}

std::string to_csv(const ComparisonTable& table) {
  std::string out = "method,accuracy,f1,yes_rate,precision,recall,n,tp,fp,tn,fn,other\n";
  for (const auto& row : table.rows) {
    const auto& r = row.report;
    char buf[256];
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu,%zu,%zu,%zu,%zu\n",
                  r.accuracy, r.f1, r.yes_rate, r.precision, r.recall, r.n, r.confusion.tp,
                  r.confusion.fp, r.confusion.tn, r.confusion.fn, r.confusion.other);
    out += csv_field(row.name) + buf;
  }
  return out;
}

}  // namespace decode_lab
