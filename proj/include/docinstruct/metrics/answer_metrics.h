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

#ifndef DOCINSTRUCT_METRICS_ANSWER_METRICS_H_
#define DOCINSTRUCT_METRICS_ANSWER_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "docinstruct/metrics/normalize.h"

namespace docinstruct::metrics {

inline constexpr double kAnlsThreshold = 0.5;
inline constexpr double kRelaxedTolerance = 0.05;

// Average normalized Levenshtein similarity for one sample: the best over
// golds of 1 - d/max(len), zeroed once the normalized distance reaches tau.
// Throws Error(kEmptyGoldSet) when golds is empty.
double anls(std::string_view pred, std::span<const std::string> golds,
            double tau = kAnlsThreshold,
            const NormalizationPolicy& policy = NormalizationPolicy::defaults());

// Parses a numeric answer, allowing one trailing '%' and a leading '+'.
std::optional<double> parse_number(std::string_view text);

// Chart-QA relaxed accuracy: normalized equality, or numeric agreement within
// tol relative to the gold value.
bool relaxed_match(
    std::string_view pred, std::string_view gold,
    double tol = kRelaxedTolerance,
    const NormalizationPolicy& policy = NormalizationPolicy::defaults());

// min(#matching refs / 3, 1). With fewer than three references the divisor
// is the number of references.
double vqa_soft_accuracy(
    std::string_view pred, std::span<const std::string> refs,
    const NormalizationPolicy& policy = NormalizationPolicy::defaults());

// 1 when the normalized prediction equals any normalized gold.
int exact_accuracy(
    std::string_view pred, std::span<const std::string> golds,
    const NormalizationPolicy& policy = NormalizationPolicy::defaults());

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

using KeyValues = std::map<std::string, std::string>;

// Pair-level F1. Pairs whose value is "None" are dropped on both sides. An
// empty side scores 1 against another empty side and 0 otherwise, which keeps
// P(a, b) == R(b, a).
PrecisionRecall kv_f1(
    const KeyValues& pred, const KeyValues& gold,
    const NormalizationPolicy& policy = NormalizationPolicy::defaults());

}  // namespace docinstruct::metrics

#endif  // DOCINSTRUCT_METRICS_ANSWER_METRICS_H_
