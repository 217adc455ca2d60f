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

#ifndef DOCINSTRUCT_METRICS_NORMALIZE_H_
#define DOCINSTRUCT_METRICS_NORMALIZE_H_

#include <string>
#include <string_view>

namespace docinstruct::metrics {

// Answer normalization applied before comparison. Only ASCII is case-folded or
// treated as whitespace/punctuation; other bytes pass through unchanged.
// Steps run in a fixed order (case, punctuation, inner whitespace, outer
// whitespace) so that normalize is idempotent for every flag combination.
struct NormalizationPolicy {
  bool lowercase = true;
  bool strip_outer_whitespace = true;
  bool collapse_inner_whitespace = true;
  bool strip_punctuation = false;

  // lowercase + strip outer + collapse inner; punctuation kept so that
  // numeric answers such as "1,000" survive.
  static NormalizationPolicy defaults() { return {}; }
  static NormalizationPolicy identity() { return {false, false, false, false}; }
  // Default plus punctuation stripping; used to tokenize captions.
  static NormalizationPolicy caption() { return {true, true, true, true}; }
};

std::string normalize(std::string_view text, const NormalizationPolicy& policy);

}  // namespace docinstruct::metrics

#endif  // DOCINSTRUCT_METRICS_NORMALIZE_H_
