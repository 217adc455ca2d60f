// Copyright 2026 The DocInstruct Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOCINSTRUCT_BENCH_H_
#define DOCINSTRUCT_BENCH_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docinstruct/jsonl.h"
#include "docinstruct/metrics/normalize.h"
#include "docinstruct/types.h"

namespace docinstruct::bench {

enum class MetricKind {
  kAnls,
  kRelaxedAccuracy,
  kVqaSoftAccuracy,
  kKvF1,
  kExactAccuracy,
  kCider,
};

// "anls", "relaxed_accuracy", "vqa_accuracy", "kv_f1", "exact_accuracy",
// "cider"
std::string_view to_string(MetricKind metric);
std::optional<MetricKind> parse_metric(std::string_view name);

struct MetricBinding {
  MetricKind metric = MetricKind::kExactAccuracy;
  metrics::NormalizationPolicy policy = metrics::NormalizationPolicy::defaults();
};

// Conventional metric per benchmark dataset id.
const std::map<std::string, MetricBinding, std::less<>>& default_bindings();

// Throws Error(kMissingMetricBinding) for an unbound dataset.
MetricBinding binding_for(std::string_view dataset_id);

struct Prediction {
  std::string record_id;
  std::string prediction;
};

// Lines {"record_id": str, "prediction": str}; ids must be unique.
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

struct MetricReport {
  std::string model = "run";
  std::string dataset;
  MetricKind metric = MetricKind::kExactAccuracy;
  // 0..100 for every metric except CIDEr (100 x unit corpus score).
  double score = 0.0;
  std::size_t n_samples = 0;
  // Gold records that had no prediction; each scored as a non-answer.
  std::size_t unanswered = 0;
  std::vector<std::pair<std::string, double>> per_sample;
  std::string note;
};

// Scores predictions against gold records of one test split. Units are gold
// records, except for key-value F1 where a unit is one source document (all
// records sharing "{dataset}:{sample}"). Throws Error(kUnknownRecordId) for a
// prediction without gold.
MetricReport score_run(const std::vector<Prediction>& predictions,
                       const std::vector<InstructionRecord>& gold,
                       std::string_view dataset_id,
                       const MetricBinding& binding,
                       bool keep_per_sample = false);

Json to_json(const MetricReport& report);
MetricReport report_from_json(const Json& obj);

struct BaselineCell {
  double value = 0.0;
  std::string text;
};

// Published scores, one row per model. Loaded from a tab-separated fixture:
// '#' lines are comments, "@title<TAB>..." names the table, the first other
// line is the header ("model" followed by dataset ids), '-' marks a score
// that was not reported.
struct BaselineTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::string> models;
  std::map<std::pair<std::string, std::string>, BaselineCell> cells;
};

BaselineTable parse_baselines(std::string_view text, const std::string& source);
BaselineTable load_baselines(const std::filesystem::path& path);

struct ComparisonCell {
  double value = 0.0;
  std::string text;
  bool best = false;
};

struct ComparisonTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::string> models;
  // rows[i][j] belongs to models[i], columns[j].
  std::vector<std::vector<std::optional<ComparisonCell>>> rows;
};

// Baseline rows first, then run reports. A report whose model already has a
// row replaces that row's cell. Every cell equal to its column maximum is
// flagged best.
ComparisonTable compare(const std::vector<MetricReport>& reports,
                        const BaselineTable& baselines);

// Aligned plain text; best cells carry a trailing '*', missing cells '-'.
std::string render_text(const ComparisonTable& table);
// One {"model", "dataset", "value", "best"} object per cell.
std::string render_jsonl(const ComparisonTable& table);

std::string display_name(std::string_view dataset_id);

}  // namespace docinstruct::bench

#endif  // DOCINSTRUCT_BENCH_H_
