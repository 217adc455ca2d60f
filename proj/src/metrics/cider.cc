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

#include "docinstruct/metrics/cider.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "docinstruct/error.h"

namespace docinstruct::metrics {

namespace {

// Per-order n-gram counts; keys are space-joined tokens.
using NgramCounts = std::vector<std::unordered_map<std::string, double>>;

struct Cooked {
  NgramCounts counts;
  double length = 0.0;
};

Cooked cook(const std::vector<std::string>& tokens, int n_max) {
  Cooked c;
  c.counts.resize(static_cast<std::size_t>(n_max));
  c.length = static_cast<double>(tokens.size());
  for (int n = 1; n <= n_max; ++n) {
    if (tokens.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int k = 1; k < n; ++k) {
        gram += ' ';
        gram += tokens[i + k];
      }
      c.counts[n - 1][gram] += 1.0;
    }
  }
  return c;
}

struct TfIdf {
  NgramCounts weights;
  std::vector<double> norms;
  double length = 0.0;
};

// Immutable corpus statistic: document frequency of every n-gram over the
// reference sets, plus log of the corpus size.
class CorpusStats {
 public:
  CorpusStats(const std::vector<std::vector<Cooked>>& refs) {
    for (const auto& item : refs) {
      std::set<std::string_view> grams;
      for (const auto& r : item)
        for (const auto& order : r.counts)
          for (const auto& [g, _] : order) grams.insert(g);
      for (auto g : grams) doc_freq_[std::string(g)] += 1.0;
    }
    log_corpus_size_ = std::log(static_cast<double>(refs.size()));
  }

  TfIdf vectorize(const Cooked& c) const {
    TfIdf v;
    v.weights.resize(c.counts.size());
    v.norms.assign(c.counts.size(), 0.0);
    v.length = c.length;
    for (std::size_t n = 0; n < c.counts.size(); ++n) {
      for (const auto& [g, tf] : c.counts[n]) {
        auto it = doc_freq_.find(g);
        double df = it == doc_freq_.end() ? 0.0 : it->second;
        double w = tf * (log_corpus_size_ - std::log(std::max(1.0, df)));
        v.weights[n][g] = w;
        v.norms[n] += w * w;
      }
      v.norms[n] = std::sqrt(v.norms[n]);
    }
    return v;
  }

 private:
  std::unordered_map<std::string, double> doc_freq_;
  double log_corpus_size_ = 0.0;
};

std::vector<double> similarity(const TfIdf& cand, const TfIdf& ref,
                               double sigma) {
  double delta = cand.length - ref.length;
  double penalty = std::exp(-(delta * delta) / (2.0 * sigma * sigma));
  std::vector<double> val(cand.weights.size(), 0.0);
  for (std::size_t n = 0; n < cand.weights.size(); ++n) {
    for (const auto& [g, w] : cand.weights[n]) {
      auto it = ref.weights[n].find(g);
      if (it == ref.weights[n].end()) continue;
      val[n] += std::min(w, it->second) * it->second;
    }
    if (cand.norms[n] != 0.0 && ref.norms[n] != 0.0)
      val[n] /= cand.norms[n] * ref.norms[n];
    val[n] *= penalty;
  }
  return val;
}

}  // namespace

std::vector<std::string> tokenize_caption(std::string_view text,
                                          const NormalizationPolicy& policy) {
  std::istringstream in(normalize(text, policy));
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

CiderResult cider(
    const std::map<std::string, std::string>& candidates,
    const std::map<std::string, std::vector<std::string>>& references,
    const CiderOptions& options) {
  if (options.n_max < 1)
    throw Error(ErrorCode::kInvalidArgument, "n_max must be at least 1");
  if (candidates.size() != references.size())
    throw Error(ErrorCode::kIdMismatch,
                "candidate and reference id sets differ in size");
  auto ref_it = references.begin();
  for (auto c = candidates.begin(); c != candidates.end(); ++c, ++ref_it) {
    if (c->first != ref_it->first)
      throw Error(ErrorCode::kIdMismatch,
                  "id '" + c->first + "' has no matching reference entry");
    if (ref_it->second.empty())
      throw Error(ErrorCode::kEmptyReference,
                  "id '" + ref_it->first + "' has no references");
  }

  CiderResult result;
  if (candidates.empty()) return result;

  std::vector<std::vector<Cooked>> cooked_refs;
  std::vector<Cooked> cooked_cands;
  cooked_refs.reserve(references.size());
  for (const auto& [id, refs] : references) {
    std::vector<Cooked> item;
    for (const auto& r : refs)
      item.push_back(cook(tokenize_caption(r, options.tokenization), options.n_max));
    cooked_refs.push_back(std::move(item));
  }
  for (const auto& [id, cand] : candidates)
    cooked_cands.push_back(
        cook(tokenize_caption(cand, options.tokenization), options.n_max));

  const CorpusStats stats(cooked_refs);
  double total = 0.0;
  std::size_t i = 0;
  for (const auto& [id, _] : candidates) {
    TfIdf cand = stats.vectorize(cooked_cands[i]);
    std::vector<double> sum(static_cast<std::size_t>(options.n_max), 0.0);
    for (const auto& ref : cooked_refs[i]) {
      std::vector<double> s = similarity(cand, stats.vectorize(ref), options.sigma);
      for (std::size_t n = 0; n < sum.size(); ++n) sum[n] += s[n];
    }
    double mean_over_n = 0.0;
    for (double s : sum) mean_over_n += s;
    mean_over_n /= static_cast<double>(sum.size());
    double score = mean_over_n / static_cast<double>(cooked_refs[i].size()) * 10.0;
    result.per_item.emplace(id, score);
    total += score;
    ++i;
  }
  result.corpus = total / static_cast<double>(candidates.size());
  return result;
}

}  // namespace docinstruct::metrics
