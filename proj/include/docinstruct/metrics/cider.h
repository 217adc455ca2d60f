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

#ifndef DOCINSTRUCT_METRICS_CIDER_H_
#define DOCINSTRUCT_METRICS_CIDER_H_

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "docinstruct/metrics/normalize.h"

namespace docinstruct::metrics {

struct CiderOptions {
  int n_max = 4;
  double sigma = 6.0;
  NormalizationPolicy tokenization = NormalizationPolicy::caption();
};

struct CiderResult {
  // Mean of per-item scores. Unit scale: an item identical to all of its
  // references with enough n-grams scores 10.
  double corpus = 0.0;
  std::map<std::string, double> per_item;
};

// Lowercased, punctuation-free whitespace tokens.
std::vector<std::string> tokenize_caption(std::string_view text,
                                          const NormalizationPolicy& policy);

// CIDEr-D. Document frequencies come from the reference corpus; each n-gram
// order contributes a clipped TF-IDF cosine with a Gaussian length penalty.
// Throws Error(kIdMismatch) when the id sets differ and Error(kEmptyReference)
// when an item has no references.
CiderResult cider(const std::map<std::string, std::string>& candidates,
                  const std::map<std::string, std::vector<std::string>>& references,
                  const CiderOptions& options = {});

}  // namespace docinstruct::metrics

#endif  // DOCINSTRUCT_METRICS_CIDER_H_
