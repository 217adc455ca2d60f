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

#include "docinstruct/metrics/answer_metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "docinstruct/error.h"
#include "docinstruct/metrics/levenshtein.h"

namespace docinstruct::metrics {

namespace {

void require_golds(std::span<const std::string> golds) {
  if (golds.empty())
    throw Error(ErrorCode::kEmptyGoldSet, "gold answer list is empty");
}

constexpr std::string_view kNone = "None";

}  // namespace

double anls(std::string_view pred, std::span<const std::string> golds,
            double tau, const NormalizationPolicy& policy) {
  require_golds(golds);
  const std::u32string p = decode_utf8(normalize(pred, policy));
  double best = 0.0;
  for (const auto& gold : golds) {
    const std::u32string g = decode_utf8(normalize(gold, policy));
    if (p == g) return 1.0;
    std::size_t longest = std::max(p.size(), g.size());
    std::size_t dist = levenshtein(p, g);
    double nl = static_cast<double>(dist) / static_cast<double>(longest);
    // (longest - dist) / longest rounds once, so 4/5 is exactly 0.8.
    double s = nl < tau ? static_cast<double>(longest - dist) /
                              static_cast<double>(longest)
                        : 0.0;
    best = std::max(best, s);
  }
  return best;
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.back() == '%') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

bool relaxed_match(std::string_view pred, std::string_view gold, double tol,
                   const NormalizationPolicy& policy) {
  std::string p = normalize(pred, policy);
  std::string g = normalize(gold, policy);
  if (p == g) return true;
  auto pv = parse_number(p);
  auto gv = parse_number(g);
  if (!pv || !gv) return false;
  return std::fabs(*pv - *gv) <= tol * std::fabs(*gv);
}

double vqa_soft_accuracy(std::string_view pred,
                         std::span<const std::string> refs,
                         const NormalizationPolicy& policy) {
  require_golds(refs);
  std::string p = normalize(pred, policy);
  std::size_t matches = static_cast<std::size_t>(
      std::count_if(refs.begin(), refs.end(), [&](const std::string& r) {
        return normalize(r, policy) == p;
      }));
  double divisor = static_cast<double>(std::min<std::size_t>(3, refs.size()));
  return std::min(static_cast<double>(matches) / divisor, 1.0);
}

int exact_accuracy(std::string_view pred, std::span<const std::string> golds,
                   const NormalizationPolicy& policy) {
  require_golds(golds);
  std::string p = normalize(pred, policy);
  for (const auto& g : golds)
    if (normalize(g, policy) == p) return 1;
  return 0;
}

PrecisionRecall kv_f1(const KeyValues& pred, const KeyValues& gold,
                      const NormalizationPolicy& policy) {
  PrecisionRecall out;
  const std::string none = normalize(kNone, policy);
  auto is_none = [&](const std::string& v) { return normalize(v, policy) == none; };
  for (const auto& [key, value] : pred) {
    if (is_none(value)) continue;
    ++out.predicted;
    auto it = gold.find(key);
    if (it != gold.end() && !is_none(it->second) &&
        normalize(it->second, policy) == normalize(value, policy))
      ++out.true_positives;
  }
  for (const auto& [key, value] : gold)
    if (!is_none(value)) ++out.gold;

  auto ratio = [](std::size_t num, std::size_t den, std::size_t other) {
    if (den == 0) return other == 0 ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  out.precision = ratio(out.true_positives, out.predicted, out.gold);
  out.recall = ratio(out.true_positives, out.gold, out.predicted);
  double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

}  // namespace docinstruct::metrics
